"""Cross-check suite behind the `verify` command: desk-scale consistency
checks between the enumerators, the exhaustive oracles, closed forms, and
the structural lemmas."""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import dp, sequences as sq


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def _catalan(n):
    return math.comb(2 * n, n) // (n + 1)


def run_checks(max_n=10, cache_terms=12) -> list:
    """Run the suite; max_n bounds the exhaustive enumerations."""
    max_n = max(4, min(max_n, 14))
    results = []

    def check(name, ok, detail=""):
        results.append(CheckResult(name, bool(ok), detail))

    asc = dp.enumerate_ascent(max(6, max_n))
    check("golden-ascent-series", asc.values[:6] == [1, 2, 5, 15, 53, 217],
          f"got {asc.values[:6]}")

    got000 = dp.enumerate_000_polynomial(7).values
    check("golden-000-prefix", got000 == [1, 2, 4, 10, 27, 83, 277], f"got {got000}")

    trace = [dp.suffix_count("120", n, 4, 0, {0, 1, 2, 4}) for n in range(6)]
    check("golden-120-state-trace", trace == [1, 6, 32, 160, 778, 3747], f"got {trace}")

    for pat, enum in (("000", dp.enumerate_000_polynomial), ("100", dp.enumerate_100),
                      ("110", dp.enumerate_110), ("120", dp.enumerate_120)):
        got = enum(max_n).values
        want = sq.brute_force_avoiders(pat, max_n).values
        first_bad = next((i + 1 for i, (g, w) in enumerate(zip(got, want)) if g != w), None)
        check(f"oracle-equivalence-{pat}", got == want,
              "" if got == want else f"first mismatch at n={first_bad}")

    for pat, form in (("001", lambda k: 2 ** (k - 1)),
                      ("010", lambda k: 2 ** (k - 1)),
                      ("011", lambda k: 2 ** (k - 1)),
                      ("012", lambda k: 2 ** (k - 1)),
                      ("102", lambda k: (3 ** (k - 1) + 1) // 2),
                      ("101", _catalan), ("021", _catalan)):
        got = sq.brute_force_avoiders(pat, max_n).values
        want = [form(k) for k in range(1, max_n + 1)]
        check(f"closed-form-{pat}", got == want)

    n_pe = min(max_n + 6, 20)
    check("poly-equals-exponential-000",
          dp.enumerate_000_polynomial(n_pe).values
          == dp.enumerate_000_exponential(n_pe).values, f"n={n_pe}")

    n_weak = min(max_n, 9)
    w120 = sq.brute_force_avoiders("120", n_weak, weak=True).values
    w201 = sq.brute_force_avoiders("201", n_weak, weak=True).values
    check("weak-theorem-120-vs-201", w120 == w201, f"n={n_weak}")

    n_inv = min(max_n - 2, 7)
    ok_inv = True
    for k in range(1, n_inv + 1):
        for s in sq.weak_ascent_sequences(k):
            m = sq.weak_reverse_complement(s)
            if (sq.weak_reverse_complement(m) != tuple(s)
                    or sq.ascent_count(m) != sq.ascent_count(s)
                    or not sq.is_weak_ascent_sequence(m)
                    or sq.contains_pattern(s, (1, 2, 0)) != sq.contains_pattern(m, (2, 0, 1))):
                ok_inv = False
    check("reverse-complement-involution", ok_inv, f"lengths <= {n_inv}")

    c000 = dp.enumerate_000_polynomial(min(2 * (max_n // 2), 12))
    c100 = dp.enumerate_100(min(2 * (max_n // 2), 12))
    nmax_fact = c000.last_index // 2
    ok_lb = all(c000.at(2 * n) >= math.factorial(n) and c100.at(2 * n) >= math.factorial(n)
                for n in range(1, nmax_fact + 1))
    c110 = dp.enumerate_110(12)
    ok_lb = ok_lb and all(c110.at(3 * n) >= math.factorial(n) for n in range(1, 5))
    check("factorial-lower-bounds", ok_lb)

    c120 = dp.enumerate_120(max_n)
    ok_sm = all(c120.at(m + n) >= c120.at(m) * c120.at(n)
                for m in range(1, max_n) for n in range(1, max_n - m + 1))
    check("supermultiplicativity-120", ok_sm)

    _, cache000 = dp.enumerate_with_cache("000", cache_terms)
    rep = dp.cache_repetition_report(cache000)
    ok_pairs, n_pairs = bijection_lemma_pairs_equal(cache000, min(cache_terms, 14))
    check("bijection-lemma-pairs", ok_pairs, f"{n_pairs} pairs checked")
    _, cache110 = dp.enumerate_with_cache("110", cache_terms)
    rep110 = dp.cache_repetition_report(cache110)
    check("cache-repetition-ordering",
          rep110.single_valued_fraction < rep.single_valued_fraction,
          f"000 fraction {rep.single_valued_fraction:.3f}, "
          f"110 fraction {rep110.single_valued_fraction:.3f}")
    return results


def bijection_lemma_pairs_equal(cache, n_max):
    """For every cached key and every i in S with i < l and i+1 not in S,
    the key with i replaced by i+1 must hold the same value."""
    checked = 0
    for (n, a, l, S) in list(cache.data):
        if n > n_max:
            continue
        for i in range(max(l, 0)):
            if (S >> i) & 1 and not (S >> (i + 1)) & 1 and i < l:
                partner = (S & ~(1 << i)) | (1 << (i + 1))
                checked += 1
                if (dp.suffix_count(cache.variant, n, a, l, partner, cache=cache)
                        != cache.data[(n, a, l, S)]):
                    return False, checked
    return True, checked


def compare_series_file(loaded, pattern, algorithm="dp"):
    """Recompute the exact prefix of a series file; return the first
    mismatching index or None."""
    n = loaded.n_exact
    computed = (dp.enumerate_ascent(n) if pattern == "none"
                else dp.enumerate_avoiders(pattern, n, algorithm=algorithm,
                                           allow_over_cap=True))
    for k in range(1, n + 1):
        if computed.at(k) != loaded.exact.at(k):
            return k
    return None
