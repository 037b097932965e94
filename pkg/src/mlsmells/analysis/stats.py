"""Nonparametric tests and effect sizes used by the study analytics.

Small samples take exact enumeration paths (the permutation distribution is
computed in integer arithmetic where possible); larger samples use the
classic normal / chi-square approximations with tie corrections. Tail
probabilities come from erfc and a regularized incomplete gamma, so the
package needs no numerical dependencies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Sequence

DEFAULT_ALPHA = 0.05
EXACT_LIMIT = 12  # max sample size routed to exact enumeration


@dataclass(frozen=True)
class StatResult:
    test: str
    statistic: float
    p_value: float
    effect_size: float | None
    alpha: float
    significant: bool
    method: str
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {
            "test": self.test,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "effect_size": self.effect_size,
            "alpha": self.alpha,
            "significant": self.significant,
            "method": self.method,
            "degenerate": self.degenerate,
        }


def _result(
    test: str,
    statistic: float,
    p_value: float,
    effect_size: float | None,
    alpha: float,
    method: str,
    degenerate: bool = False,
) -> StatResult:
    p_value = min(1.0, max(0.0, p_value))
    return StatResult(
        test=test,
        statistic=statistic,
        p_value=p_value,
        effect_size=effect_size,
        alpha=alpha,
        significant=p_value < alpha,
        method=method,
        degenerate=degenerate,
    )


def rankdata(values: Sequence[float]) -> list[float]:
    """Average ranks (1-based); ties share the mean of their rank range."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def normal_sf(z: float) -> float:
    """Upper tail of the standard normal."""
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def _gamma_q(s: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(s, x), series / continued fraction."""
    if x < 0 or s <= 0:
        raise ValueError("gamma_q requires x >= 0 and s > 0")
    if x == 0:
        return 1.0
    log_prefix = -x + s * math.log(x) - math.lgamma(s)
    if x < s + 1:
        ap = s
        total = 1.0 / s
        delta = total
        for _ in range(1000):
            ap += 1
            delta *= x / ap
            total += delta
            if abs(delta) < abs(total) * 1e-17:
                break
        return min(1.0, max(0.0, 1.0 - total * math.exp(log_prefix)))
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 1000):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        factor = d * c
        h *= factor
        if abs(factor - 1.0) < 1e-17:
            break
    return min(1.0, max(0.0, math.exp(log_prefix) * h))


def chi2_sf(x: float, df: int) -> float:
    """Upper tail of the chi-square distribution with df degrees of freedom."""
    if x <= 0:
        return 1.0
    return _gamma_q(df / 2.0, x / 2.0)


def _two_sided_from_counts(count_le: int, count_ge: int, total: int) -> float:
    """Two-sided exact p: twice the smaller tail, capped at 1."""
    return min(1.0, 2.0 * min(count_le, count_ge) / total)


def _scaled_int_ranks(ranks: Sequence[float]) -> list[int]:
    # average ranks are multiples of 0.5; doubling keeps enumeration integral
    return [round(2 * r) for r in ranks]


def _tie_term(values: Sequence[float]) -> float:
    """Sum of t^3 - t over tie groups."""
    counts: dict[float, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return float(sum(t**3 - t for t in counts.values() if t > 1))


@dataclass(frozen=True)
class CliffsDelta:
    delta: float
    magnitude: str


def cliffs_magnitude(delta: float) -> str:
    size = abs(delta)
    if size < 0.147:
        return "negligible"
    if size < 0.33:
        return "small"
    if size < 0.474:
        return "medium"
    return "large"


def cliffs_delta(a: Sequence[float], b: Sequence[float]) -> CliffsDelta:
    """delta = (#(a_i > b_j) - #(a_i < b_j)) / (|a| * |b|)."""
    if not a or not b:
        raise ValueError("cliffs_delta requires non-empty samples")
    gt = lt = 0
    for x in a:
        for y in b:
            if x > y:
                gt += 1
            elif x < y:
                lt += 1
    delta = (gt - lt) / (len(a) * len(b))
    return CliffsDelta(delta=delta, magnitude=cliffs_magnitude(delta))


def wilcoxon_signed_rank(
    x: Sequence[float],
    y: Sequence[float],
    alpha: float = DEFAULT_ALPHA,
    exact_limit: int = EXACT_LIMIT,
) -> StatResult:
    """Paired Wilcoxon test; zero differences are dropped.

    Exact sign-assignment enumeration up to exact_limit non-zero pairs,
    normal approximation with continuity and tie corrections above. The
    statistic is the smaller signed-rank sum.
    """
    if len(x) != len(y) or not x:
        raise ValueError("paired samples must be equal-length and non-empty")
    diffs = [xi - yi for xi, yi in zip(x, y) if xi != yi]
    n = len(diffs)
    effect = cliffs_delta(x, y).delta
    if n == 0:
        return _result("wilcoxon-signed-rank", 0.0, 1.0, effect, alpha, "degenerate", degenerate=True)
    ranks = rankdata([abs(d) for d in diffs])
    w_plus = sum(r for r, d in zip(ranks, diffs) if d > 0)
    w_minus = sum(r for r, d in zip(ranks, diffs) if d < 0)
    statistic = min(w_plus, w_minus)

    if n <= exact_limit:
        weights = _scaled_int_ranks(ranks)
        obs = round(2 * w_plus)
        # distribution of 2*W+ over all 2^n sign assignments
        dist = [0] * (sum(weights) + 1)
        dist[0] = 1
        for w in weights:
            for total in range(len(dist) - 1, w - 1, -1):
                if dist[total - w]:
                    dist[total] += dist[total - w]
        count_le = sum(dist[: obs + 1])
        count_ge = sum(dist[obs:])
        p = _two_sided_from_counts(count_le, count_ge, 2**n)
        return _result("wilcoxon-signed-rank", statistic, p, effect, alpha, "exact")

    mean_w = n * (n + 1) / 4.0
    var_w = n * (n + 1) * (2 * n + 1) / 24.0 - _tie_term([abs(d) for d in diffs]) / 48.0
    if var_w <= 0:
        return _result("wilcoxon-signed-rank", statistic, 1.0, effect, alpha, "degenerate", degenerate=True)
    shift = w_plus - mean_w
    corrected = shift - math.copysign(0.5, shift) if shift != 0 else 0.0
    z = corrected / math.sqrt(var_w)
    p = 2.0 * normal_sf(abs(z))
    return _result("wilcoxon-signed-rank", statistic, p, effect, alpha, "normal-approx")


def wilcoxon_rank_sum(
    a: Sequence[float],
    b: Sequence[float],
    alpha: float = DEFAULT_ALPHA,
    exact_limit: int = EXACT_LIMIT,
) -> StatResult:
    """Independent-samples Wilcoxon (Mann-Whitney U statistic).

    Exact permutation enumeration while |a|+|b| <= exact_limit; otherwise
    normal approximation with the tie-corrected variance.
    """
    if not a or not b:
        raise ValueError("both samples must be non-empty")
    n, m = len(a), len(b)
    pooled = list(a) + list(b)
    ranks = rankdata(pooled)
    w_a = sum(ranks[:n])
    u_a = w_a - n * (n + 1) / 2.0
    effect = cliffs_delta(a, b).delta

    if n + m <= exact_limit:
        weights = _scaled_int_ranks(ranks)
        obs = round(2 * w_a)
        count_le = count_ge = 0
        total = 0
        for combo in combinations(range(n + m), n):
            w = sum(weights[i] for i in combo)
            total += 1
            if w <= obs:
                count_le += 1
            if w >= obs:
                count_ge += 1
        p = _two_sided_from_counts(count_le, count_ge, total)
        return _result("wilcoxon-rank-sum", u_a, p, effect, alpha, "exact")

    big_n = n + m
    mean_u = n * m / 2.0
    tie_adjust = _tie_term(pooled) / (big_n * (big_n - 1))
    var_u = n * m / 12.0 * ((big_n + 1) - tie_adjust)
    if var_u <= 0:
        return _result("wilcoxon-rank-sum", u_a, 1.0, effect, alpha, "degenerate", degenerate=True)
    shift = u_a - mean_u
    corrected = shift - math.copysign(0.5, shift) if shift != 0 else 0.0
    z = corrected / math.sqrt(var_u)
    p = 2.0 * normal_sf(abs(z))
    return _result("wilcoxon-rank-sum", u_a, p, effect, alpha, "normal-approx")


def _friedman_statistic(rank_rows: list[list[float]], k: int, n: int) -> float | None:
    """Conover's tie-corrected form; None when every block is fully tied."""
    column_sums = [sum(row[i] for row in rank_rows) for i in range(k)]
    a_term = sum(r * r for row in rank_rows for r in row)
    c_term = n * k * (k + 1) ** 2 / 4.0
    if a_term == c_term:
        return None
    t_term = sum((rj - n * (k + 1) / 2.0) ** 2 for rj in column_sums)
    return (k - 1) * t_term / (a_term - c_term)


def friedman(
    groups: Sequence[Sequence[float]],
    alpha: float = DEFAULT_ALPHA,
    method: str = "chi-square",
    max_exact_permutations: int = 2_000_000,
) -> StatResult:
    """Friedman test over k related samples (equal lengths = n blocks).

    The statistic uses average-rank tie handling; the p-value comes from the
    chi-square approximation (k-1 df) or, with method="exact", from the
    within-block permutation distribution.
    """
    k = len(groups)
    if k < 3:
        raise ValueError("friedman requires at least 3 related samples (use a Wilcoxon test for 2)")
    n = len(groups[0])
    if n < 2:
        raise ValueError("friedman requires at least 2 blocks")
    if any(len(g) != n for g in groups):
        raise ValueError(
            "friedman blocks must be equal-length; for independent unequal groups use kruskal_wallis"
        )
    rank_rows = [rankdata([groups[i][j] for i in range(k)]) for j in range(n)]
    statistic = _friedman_statistic(rank_rows, k, n)
    if statistic is None:
        return _result("friedman", 0.0, 1.0, None, alpha, "degenerate", degenerate=True)

    if method == "chi-square":
        return _result("friedman", statistic, chi2_sf(statistic, k - 1), None, alpha, "chi-square")
    if method != "exact":
        raise ValueError(f"unknown friedman method: {method!r}")
    total_perms = math.factorial(k) ** n
    if total_perms > max_exact_permutations:
        raise ValueError(f"exact friedman infeasible: {total_perms} permutations")
    block_perms = [sorted(set(permutations(row))) for row in rank_rows]
    at_least = 0
    total = 0

    def recurse(block: int, sums: list[float], weight: int) -> None:
        nonlocal at_least, total
        if block == n:
            t_term = sum((rj - n * (k + 1) / 2.0) ** 2 for rj in sums)
            a_term_local = a_term  # ties are permutation-invariant within blocks
            stat = (k - 1) * t_term / (a_term_local - c_term)
            total += weight
            if stat >= statistic - 1e-9:
                at_least += weight
            return
        row = rank_rows[block]
        full = math.factorial(k)
        distinct = block_perms[block]
        multiplicity = full // len(distinct)
        for perm in distinct:
            recurse(block + 1, [s + r for s, r in zip(sums, perm)], weight * multiplicity)

    a_term = sum(r * r for row in rank_rows for r in row)
    c_term = n * k * (k + 1) ** 2 / 4.0
    recurse(0, [0.0] * k, 1)
    return _result("friedman", statistic, at_least / total, None, alpha, "exact")


def kruskal_wallis(groups: Sequence[Sequence[float]], alpha: float = DEFAULT_ALPHA) -> StatResult:
    """Kruskal-Wallis H test for k independent (possibly unequal) samples,
    with tie correction; provided as the conventional alternative for
    comparing independent size groups."""
    if len(groups) < 2 or any(not g for g in groups):
        raise ValueError("kruskal_wallis requires >= 2 non-empty groups")
    pooled = [v for g in groups for v in g]
    big_n = len(pooled)
    ranks = rankdata(pooled)
    h = 0.0
    pos = 0
    for g in groups:
        r_sum = sum(ranks[pos : pos + len(g)])
        h += r_sum * r_sum / len(g)
        pos += len(g)
    h = 12.0 / (big_n * (big_n + 1)) * h - 3.0 * (big_n + 1)
    tie_factor = 1.0 - _tie_term(pooled) / (big_n**3 - big_n)
    if tie_factor <= 0:
        return _result("kruskal-wallis", 0.0, 1.0, None, alpha, "degenerate", degenerate=True)
    h /= tie_factor
    return _result("kruskal-wallis", h, chi2_sf(h, len(groups) - 1), None, alpha, "chi-square")


def kappa_from_rates(p_o: float, p_yes_a: float, p_yes_b: float) -> float:
    """Kappa from the observed agreement rate and the two Yes-marginals.

    Degenerate marginals: both raters constant and equal -> 1.0; total
    disagreement with zero chance agreement -> -1.0.
    """
    p_e = p_yes_a * p_yes_b + (1 - p_yes_a) * (1 - p_yes_b)
    if p_e == 1.0:
        return 1.0 if p_o == 1.0 else -1.0
    if p_o == 0.0 and p_e == 0.0:
        return -1.0
    return (p_o - p_e) / (1.0 - p_e)


def cohen_kappa(labels_a: Sequence[bool], labels_b: Sequence[bool]) -> float:
    """Chance-corrected agreement over two equal-length boolean annotations."""
    if len(labels_a) != len(labels_b) or not labels_a:
        raise ValueError("annotations must be equal-length and non-empty")
    n = len(labels_a)
    p_o = sum(1 for a, b in zip(labels_a, labels_b) if a == b) / n
    return kappa_from_rates(p_o, sum(labels_a) / n, sum(labels_b) / n)


def holm_bonferroni(p_values: Sequence[float]) -> list[float]:
    """Holm step-down adjusted p-values, in the input order."""
    m = len(p_values)
    order = sorted(range(m), key=lambda i: p_values[i])
    adjusted = [0.0] * m
    running = 0.0
    for rank, idx in enumerate(order):
        running = max(running, (m - rank) * p_values[idx])
        adjusted[idx] = min(1.0, running)
    return adjusted
