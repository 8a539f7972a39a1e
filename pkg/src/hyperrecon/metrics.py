"""Recovery scoring and the achievability threshold."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .estimator import CliqueSet
from .exact import to_exact
from .model import ModelParams

__all__ = [
    "DegreeMismatchError",
    "RecoveryReport",
    "recovery_report",
    "achievability_predicate",
    "threshold_holds",
    "density_form_holds",
    "uniform_threshold_holds",
]


class DegreeMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class RecoveryReport:
    true_count: int
    est_count: int
    false_positives: int
    false_negatives: int

    @property
    def sym_diff(self) -> int:
        return self.false_positives + self.false_negatives

    @property
    def ratio(self) -> float:
        return self.sym_diff / max(1, self.true_count)

    @property
    def fp_rate(self) -> float:
        return self.false_positives / max(1, self.true_count)

    @property
    def fn_rate(self) -> float:
        return self.false_negatives / max(1, self.true_count)

    @property
    def empty_truth(self) -> bool:
        """Flag for trials whose ratio is only defined through the ``max(1, .)`` guard."""
        return self.true_count == 0

    def as_dict(self) -> dict:
        return {
            "true_count": self.true_count,
            "est_count": self.est_count,
            "false_positives": self.false_positives,
            "false_negatives": self.false_negatives,
            "sym_diff": self.sym_diff,
            "ratio": self.ratio,
            "empty_truth": self.empty_truth,
        }


def recovery_report(truth, estimate, degree: int | None = None) -> RecoveryReport:
    """Compare true hyperedges with an estimate by exact set arithmetic.

    ``estimate`` may be a :class:`CliqueSet` or a plain iterable of tuples.
    Raises :class:`DegreeMismatchError` if any member of either side has a
    size other than the common degree.
    """
    if isinstance(estimate, CliqueSet):
        if degree is not None and degree != estimate.size:
            raise DegreeMismatchError(f"degree mismatch: {degree} vs estimate size {estimate.size}")
        degree = estimate.size
        est = estimate.cliques
    else:
        est = frozenset(tuple(sorted(c)) for c in estimate)
    tru = frozenset(tuple(sorted(c)) for c in truth)
    sizes = {len(c) for c in tru | est}
    if degree is not None:
        sizes.add(degree)
    if len(sizes) > 1:
        raise DegreeMismatchError(f"degree mismatch: hyperedge sizes {sorted(sizes)}")
    hits = len(tru & est)
    return RecoveryReport(len(tru), len(est), len(est) - hits, len(tru) - hits)


def _threshold_rhs(d: int, delta_j: Fraction) -> Fraction:
    return Fraction(d - 2, d) + 2 * delta_j / (d * (d - 1))


def threshold_holds(d: int, delta_j, delta_star) -> bool:
    """``delta* < (d-2)/d + 2 delta_j / (d(d-1))``, evaluated exactly."""
    return to_exact(delta_star) < _threshold_rhs(d, to_exact(delta_j))


def density_form_holds(d: int, delta_j, delta_star) -> bool:
    """All-edges noise density below the true-hyperedge density, evaluated exactly."""
    c = comb(d, 2)
    return -c + c * to_exact(delta_star) < 1 - d + to_exact(delta_j)


def uniform_threshold_holds(d: int, delta) -> bool:
    """Single-class reduction: ``delta < (d-1)/(d+1)``."""
    return to_exact(delta) < Fraction(d - 1, d + 1)


def achievability_predicate(params: ModelParams, target_class: int) -> tuple[bool, float]:
    """Whether maximal-clique recovery of class ``target_class`` is guaranteed, and the margin.

    The margin is the threshold's right-hand side minus ``delta*``; the
    guarantee needs it strictly positive, so a zero margin returns False.
    """
    spec = params.classes[target_class]
    d = spec.degree
    if d < 3:
        raise ValueError("theorem requires d_j >= 3")
    if any(c.exponent is None for c in params.classes):
        raise ValueError("the threshold needs an exponent on every class")
    delta_j = to_exact(spec.exponent)
    delta_star = max(to_exact(c.exponent) for c in params.classes)
    margin = _threshold_rhs(d, delta_j) - delta_star
    holds = margin > 0
    if holds != density_form_holds(d, delta_j, delta_star):
        raise AssertionError("threshold forms disagree")  # pragma: no cover
    return holds, float(margin)
