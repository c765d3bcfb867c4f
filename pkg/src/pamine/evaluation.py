"""Summary evaluation: ROUGE-1 F1, score aggregation, Welch's t-test.

The t-distribution CDF is evaluated through the regularized incomplete
beta function (continued-fraction form), so no statistics package is
needed at runtime; the test suite cross-checks against an independent
reference implementation.
"""
from __future__ import annotations

import itertools
import math
import re
import statistics
from collections import Counter
from dataclasses import dataclass, field

_TOKEN_RE = re.compile(r"[a-z0-9]+")


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float
    overlap_count: int
    candidate_len: int
    reference_len: int


def _rouge_tokens(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def rouge1_f1(candidate: str, reference: str) -> RougeScore:
    """Clipped unigram overlap scores on lowercased alphanumeric tokens."""
    cand = _rouge_tokens(candidate)
    ref = _rouge_tokens(reference)
    if not ref:
        raise ValueError("reference must contain at least one token")
    overlap = sum((Counter(cand) & Counter(ref)).values())
    precision = overlap / len(cand) if cand else 0.0
    recall = overlap / len(ref)
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall > 0 else 0.0)
    return RougeScore(precision, recall, f1, overlap, len(cand), len(ref))


def aggregate(scores) -> tuple[float, float]:
    """Mean and sample (n-1) standard deviation; stdev is 0 for n=1."""
    values = list(scores)
    if not values:
        raise ValueError("cannot aggregate an empty score list")
    mean = statistics.fmean(values)
    stdev = statistics.stdev(values) if len(values) > 1 else 0.0
    return mean, stdev


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    max_iter = 300
    eps = 3e-16
    fpmin = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    return h


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b), numerically stable for the t-distribution use case."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def t_two_sided_pvalue(t: float, df: float) -> float:
    """P(|T| >= |t|) for Student's t with ``df`` degrees of freedom."""
    if math.isinf(t):
        return 0.0
    if t == 0.0:
        return 1.0
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))


@dataclass(frozen=True)
class TTestResult:
    t: float
    df: float
    p_value: float
    significant: bool
    alpha: float
    mean_a: float
    mean_b: float
    n_a: int
    n_b: int

    def as_dict(self) -> dict:
        return {
            "t": self.t, "df": self.df, "p_value": self.p_value,
            "significant": self.significant, "alpha": self.alpha,
            "mean_a": self.mean_a, "mean_b": self.mean_b,
            "n_a": self.n_a, "n_b": self.n_b,
        }


def _welch(mean_a: float, var_a: float, n_a: int,
           mean_b: float, var_b: float, n_b: int, alpha: float) -> TTestResult:
    se_a = var_a / n_a
    se_b = var_b / n_b
    se2 = se_a + se_b
    if se2 == 0.0:
        t = 0.0 if mean_a == mean_b else math.copysign(math.inf, mean_a - mean_b)
        df = float(n_a + n_b - 2)
    else:
        t = (mean_a - mean_b) / math.sqrt(se2)
        df = se2 * se2 / (se_a * se_a / (n_a - 1) + se_b * se_b / (n_b - 1))
    p = t_two_sided_pvalue(t, df)
    return TTestResult(t=t, df=df, p_value=p, significant=p < alpha,
                       alpha=alpha, mean_a=mean_a, mean_b=mean_b,
                       n_a=n_a, n_b=n_b)


def welch_ttest(a, b, alpha: float = 0.05) -> TTestResult:
    """Two-sided Welch's t-test on two score samples (each of size >= 2)."""
    a = list(a)
    b = list(b)
    if len(a) < 2 or len(b) < 2:
        raise ValueError("both samples need at least 2 observations")
    return _welch(statistics.fmean(a), statistics.variance(a), len(a),
                  statistics.fmean(b), statistics.variance(b), len(b), alpha)


def welch_ttest_from_stats(mean_a: float, stdev_a: float, n_a: int,
                           mean_b: float, stdev_b: float, n_b: int,
                           alpha: float = 0.05) -> TTestResult:
    """Welch's t-test from summary statistics (sample standard deviations)."""
    if n_a < 2 or n_b < 2:
        raise ValueError("both samples need at least 2 observations")
    return _welch(mean_a, stdev_a ** 2, n_a, mean_b, stdev_b ** 2, n_b, alpha)


@dataclass(frozen=True)
class SystemStats:
    mean: float
    stdev: float
    n: int


@dataclass(frozen=True)
class ComparisonReport:
    systems: dict[str, SystemStats]
    pairwise: dict[tuple[str, str], TTestResult]
    alpha: float
    notes: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "systems": {
                name: {"mean": s.mean, "stdev": s.stdev, "n": s.n}
                for name, s in self.systems.items()
            },
            "pairwise": {
                f"{a} vs {b}": result.as_dict()
                for (a, b), result in self.pairwise.items()
            },
            "notes": self.notes,
        }


def compare_systems(gold: dict[str, str], systems: dict[str, dict[str, str]],
                    alpha: float = 0.05, notes: dict | None = None
                    ) -> ComparisonReport:
    """Score every system against the gold summaries and t-test all pairs.

    ``gold`` maps employee id to the manual summary; each system maps the
    same employee ids to its auto summaries (externally produced baselines
    are fed the same way).
    """
    gold_ids = set(gold)
    for name, summaries in systems.items():
        if set(summaries) != gold_ids:
            missing = sorted(gold_ids - set(summaries))
            extra = sorted(set(summaries) - gold_ids)
            raise ValueError(
                f"system {name!r} does not cover the gold employee set"
                f" (missing {missing[:5]}, extra {extra[:5]})")
    order = sorted(gold_ids)
    scores = {
        name: [rouge1_f1(summaries[eid], gold[eid]).f1 for eid in order]
        for name, summaries in systems.items()
    }
    stats = {}
    for name in sorted(systems):
        mean, stdev = aggregate(scores[name])
        stats[name] = SystemStats(mean=mean, stdev=stdev, n=len(order))
    pairwise = {}
    if len(order) >= 2:
        for sys_a, sys_b in itertools.combinations(sorted(systems), 2):
            pairwise[(sys_a, sys_b)] = welch_ttest(scores[sys_a], scores[sys_b], alpha)
    return ComparisonReport(systems=stats, pairwise=pairwise, alpha=alpha,
                            notes=notes or {})
