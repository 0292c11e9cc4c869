"""Dynamic-programming enumerators for ascent sequences and the four
pattern-avoiding families 000, 100, 110, 120, all with exact big integers.

Two engine styles:

* Layered sweeps (ascent, 100, polynomial 000): per-length layers of state
  arrays with running prefix sums, memory bounded to two layers. Used where
  hundreds of terms are wanted.
* Set-state engines (exponential 000, 110, 120): states carry a bit-set of
  letter values. A forward sweep over packed-integer states produces the
  series; a memoized recursion over (n, a, l, S) keys produces an
  introspectable value cache for repetition analysis.

State conventions: `a` is the prior ascent count, `l` the previous letter;
value erasures can drive either to -1, which needs no special handling.
"""

from __future__ import annotations

import warnings
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import CapExceededError
from .series import CoefficientSeries

CAP_000_EXPONENTIAL = 30
CAP_110 = 36
CAP_120 = 60


def ascent_indicator(l: int, i: int) -> int:
    """1 if the next letter i rises above the previous letter l."""
    return 1 if l < i else 0


def renumber_remove(S: int, i: int) -> int:
    """Close the gap at value i: every set bit above i shifts down by one.

    Callers remove i from S first; bit i must be clear.
    """
    low = S & ((1 << i) - 1)
    return ((S >> (i + 1)) << i) | low


def renumber_floor(S: int, i: int) -> int:
    """Drop every value below i and subtract i from the rest."""
    return S >> i


def largest_below(S: int, i: int) -> int:
    """Largest element of S smaller than i, or 0 if there is none."""
    below = S & ((1 << i) - 1)
    return below.bit_length() - 1 if below else 0


def bitset(values) -> int:
    s = 0
    for v in values:
        s |= 1 << v
    return s


def bitset_values(S: int):
    return [i for i in range(S.bit_length()) if (S >> i) & 1]


# ---------------------------------------------------------------------------
# layered engines
# ---------------------------------------------------------------------------

def enumerate_ascent(n_terms: int) -> CoefficientSeries:
    """Counts of ascent sequences of lengths 1..n_terms.

    f(n, a, l) = sum_{i=0}^{a+1} f(n-1, a + [l<i], i), f(0,.,.) = 1;
    the count at length n is f(n-1, 0, 0). Layered with per-slice prefix
    sums, so a layer costs O(states) additions.
    """
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    # layer[a][l] for l = 0..a+1
    layer = [[1] * (a + 2) for a in range(n_terms)]
    terms = [1]
    for step in range(1, n_terms):
        d = n_terms - 1 - step
        # cs[a][r] = sum_{l'=0..r} layer[a][l']
        cs = []
        for a in range(min(d + 2, len(layer))):
            run = 0
            acc = []
            for v in layer[a]:
                run += v
                acc.append(run)
            cs.append(acc)
        new_layer = []
        for a in range(d + 1):
            cs_a = cs[a]
            cs_up = cs[a + 1] if a + 1 < len(cs) else None
            row = []
            for l in range(a + 2):
                v = cs_a[min(l, a + 1)]
                if cs_up is not None and l + 1 <= a + 1:
                    v += cs_up[a + 1] - cs_up[l]
                row.append(v)
            new_layer.append(row)
        layer = new_layer
        terms.append(layer[0][0])
    return CoefficientSeries(terms, first_index=1)


def enumerate_100(n_terms: int) -> CoefficientSeries:
    """Counts of 100-avoiding ascent sequences, O(n^4) states.

    State (a, l, m) where m is the largest value seen. Letter i < m erases a
    value: child (a+[l<i]-1, i-1, m-1); letter i >= m: child (a+[l<i], i, i).
    Grouping the i-sum by child slice leaves four contiguous ranges handled
    with cumulative sums:

    f(n,a,l,m) = sum_{i=0}^{min(l,m-1)} f(n-1, a-1, i-1, m-1)
               + sum_{i=l+1}^{m-1}      f(n-1, a,   i-1, m-1)
               + sum_{i=max(m,l+1)}^{a+1} f(n-1, a+1, i, i)
               + [l=m] f(n-1, a, m, m)
    """
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    # slice a: array[l+1, m] for -1 <= l <= m <= a+1 (upper triangle used)
    layer = []
    for a in range(n_terms):
        g = np.zeros((a + 3, a + 2), dtype=object)
        for m in range(a + 2):
            g[0:m + 2, m] = 1
        layer.append(g)
    terms = [1]
    for step in range(1, n_terms):
        d = n_terms - 1 - step
        cps = [np.cumsum(layer[a], axis=0) if a < len(layer) else None
               for a in range(d + 2)]
        sss = []
        for a in range(d + 2):
            if a < len(layer):
                diag = layer[a].diagonal(offset=-1)  # f(., a, i, i), i = 0..a+1
                ss = np.zeros(len(diag) + 1, dtype=object)
                ss[:-1] = np.cumsum(diag[::-1])[::-1]
                sss.append(ss)
            else:
                sss.append(None)
        new_layer = []
        for a in range(d + 1):
            cols = a + 2
            g = np.zeros((a + 3, cols), dtype=object)
            cp_am1 = cps[a - 1] if a >= 1 else None
            cp_a = cps[a]
            ss_up = sss[a + 1]
            if cp_am1 is not None:
                for m in range(1, cols):
                    lo = min(m, cp_am1.shape[0])
                    if m - 1 < cp_am1.shape[1]:
                        g[1:lo + 1, m] += cp_am1[0:lo, m - 1]
                        g[m + 1, m] += cp_am1[m - 1, m - 1]
            if cp_a is not None:
                for m in range(1, cols):
                    top = cp_a[m - 1, m - 1]
                    g[0, m] += top
                    g[1:m + 1, m] += top - cp_a[0:m, m - 1]
            if ss_up is not None:
                tail = ss_up[a + 2] if a + 2 < len(ss_up) else 0
                for m in range(cols):
                    g[0:m + 1, m] += ss_up[m] - tail
                    g[m + 1, m] += (ss_up[m + 1] if m + 1 < len(ss_up) else 0) - tail
            prev = layer[a] if a < len(layer) else None
            if prev is not None:
                for m in range(cols):
                    g[m + 1, m] += prev[m + 1, m]
            new_layer.append(g)
        layer = new_layer
        terms.append(int(layer[0][1, 0]))
    return CoefficientSeries(terms, first_index=1)


def _poly_slice_shape(a):
    n = max(a + 3, 1)
    return (n, n)


def enumerate_000_polynomial(n_terms: int) -> CoefficientSeries:
    """Counts of 000-avoiding ascent sequences with the set of once-seen
    values compressed to its cardinality K, O(n^4) states.

    Canonically S = {0..K-1}, so letter i repeats iff i < K. Erasures shift a
    and l exactly as in the exponential recursion. Slices extend to a = -2
    because erasing value 0 at a = 0 is legal; a = -2 admits no letters.

    f(n,a,l,K) = sum_{i=0}^{min(l,K-1)} f(n-1, a-1, i-1, K-1)
               + sum_{i=l+1}^{K-1}      f(n-1, a,   i-1, K-1)
               + sum_{i=K}^{min(l,a+1)} f(n-1, a,   i,   K+1)
               + sum_{i=max(K,l+1)}^{a+1} f(n-1, a+1, i, K+1)
    """
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    layer = {a: np.ones(_poly_slice_shape(a), dtype=object)
             for a in range(-2, n_terms)}
    terms = [1]
    for step in range(1, n_terms):
        d = n_terms - 1 - step
        cps = {a: np.cumsum(layer[a], axis=0)
               for a in range(-1, d + 2) if a in layer}
        new_layer = {-2: np.zeros((1, 1), dtype=object)}
        g1 = np.zeros((2, 2), dtype=object)
        g1[0, 0] = layer[0][1, 1]    # (-1,-1,K=0): letter 0 is new, chi=1
        g1[0, 1] = layer[-1][0, 0]   # (-1,-1,K=1): letter 0 repeats, chi=1
        g1[1, 0] = layer[-1][1, 1]   # (-1, 0,K=0): letter 0 is new, chi=0
        g1[1, 1] = layer[-2][0, 0]   # (-1, 0,K=1): letter 0 repeats, chi=0
        new_layer[-1] = g1
        for a in range(0, d + 1):
            rows = cols = a + 3
            g = np.zeros((rows, cols), dtype=object)
            cp_am1 = cps[a - 1]
            cp_a = cps[a]
            cp_ap1 = cps.get(a + 1)
            for K in range(cols):
                if K >= 1:
                    c = K - 1
                    if c < cp_am1.shape[1]:
                        kk = min(K - 1, cp_am1.shape[0] - 1)
                        head = min(kk + 1, rows - 1)
                        g[1:head + 1, K] += cp_am1[0:head, c]
                        if head + 1 < rows:
                            g[head + 1:, K] += cp_am1[kk, c]
                    top = cp_a[K - 1, c]
                    g[0, K] += top
                    if K >= 2:
                        g[1:K, K] += top - cp_a[0:K - 1, c]
                if K + 1 < cols:
                    g[K + 1:rows, K] += cp_a[K + 1:rows, K + 1] - cp_a[K, K + 1]
                    if cp_ap1 is not None:
                        tt = cp_ap1[a + 2, K + 1]
                        g[0:K + 1, K] += tt - cp_ap1[K, K + 1]
                        hi = min(a + 2, rows)
                        if K + 1 < hi:
                            g[K + 1:hi, K] += tt - cp_ap1[K + 1:hi, K + 1]
            new_layer[a] = g
        layer = new_layer
        terms.append(int(layer[0][1, 1]))
    return CoefficientSeries(terms, first_index=1)


# ---------------------------------------------------------------------------
# set-state engines: transitions
# ---------------------------------------------------------------------------

def _children_000(a, l, S):
    """Letter i in S: i is now proscribed, erase it (a, l shift down)."""
    out = []
    for i in range(a + 2):
        chi = 1 if l < i else 0
        if (S >> i) & 1:
            out.append((a + chi - 1, i - 1, renumber_remove(S & ~(1 << i), i)))
        else:
            out.append((a + chi, i, S | (1 << i)))
    return out


def _children_110(a, l, S):
    """Letter i in S: everything below i dies; i itself renumbers to 0 and
    stays in the set; the new last letter is recorded as 0."""
    out = []
    for i in range(a + 2):
        chi = 1 if l < i else 0
        if (S >> i) & 1:
            out.append((a + chi - i, 0, S >> i))
        else:
            out.append((a + chi, i, S | (1 << i)))
    return out


def _children_120(a, l, S):
    """Everything below the largest seen value under i dies; the shifted
    letter i-s joins the shifted set. S always retains 0."""
    out = []
    for i in range(a + 2):
        below = S & ((1 << i) - 1)
        s = below.bit_length() - 1 if below else 0
        out.append((a + (1 if l < i else 0) - s, i - s, (S >> s) | (1 << (i - s))))
    return out


_CHILDREN = {"000": _children_000, "110": _children_110, "120": _children_120}
_SET_CAPS = {"000": CAP_000_EXPONENTIAL, "110": CAP_110, "120": CAP_120}


def _check_cap(variant, n_terms, allow_over_cap):
    cap = _SET_CAPS[variant]
    if n_terms > cap:
        if not allow_over_cap:
            raise CapExceededError(
                f"{variant} set-state enumeration capped at {cap} terms "
                f"(requested {n_terms}); pass allow_over_cap=True to proceed")
        warnings.warn(f"{variant} run of {n_terms} terms exceeds cap {cap}")


def _forward_series(variant, n_terms):
    """One forward sweep over prefix states; the mass at depth d sums to the
    count at length d+1. States pack as (S << 16) | (a+2) << 8 | (l+2).

    Transitions are inlined per variant; dict traffic dominates the cost.
    """
    layer = {(1 << 16) | (2 << 8) | 2: 1}
    terms = [1]
    for _ in range(n_terms - 1):
        new = {}
        get = new.get
        if variant == "120":
            for key, w in layer.items():
                l = (key & 0xFF) - 2
                a = (key >> 8 & 0xFF) - 2
                S = key >> 16
                base = (a + 2) << 8
                for i in range(a + 2):
                    below = S & ((1 << i) - 1)
                    s = below.bit_length() - 1 if below else 0
                    nk = ((((S >> s) | (1 << (i - s))) << 16)
                          | (base + (256 if l < i else 0) - (s << 8)) | (i - s + 2))
                    v = get(nk)
                    new[nk] = w if v is None else v + w
        elif variant == "110":
            for key, w in layer.items():
                l = (key & 0xFF) - 2
                a = (key >> 8 & 0xFF) - 2
                S = key >> 16
                base = (a + 2) << 8
                for i in range(a + 2):
                    if S >> i & 1:
                        nk = ((S >> i) << 16) | (base + (256 if l < i else 0) - (i << 8)) | 2
                    else:
                        nk = ((S | (1 << i)) << 16) | (base + (256 if l < i else 0)) | (i + 2)
                    v = get(nk)
                    new[nk] = w if v is None else v + w
        elif variant == "000":
            for key, w in layer.items():
                l = (key & 0xFF) - 2
                a = (key >> 8 & 0xFF) - 2
                S = key >> 16
                base = (a + 2) << 8
                for i in range(a + 2):
                    if S >> i & 1:
                        low = S & ((1 << i) - 1)
                        nk = (((((S >> (i + 1)) << i) | low) << 16)
                              | (base + (256 if l < i else 0) - 256) | (i + 1))
                    else:
                        nk = ((S | (1 << i)) << 16) | (base + (256 if l < i else 0)) | (i + 2)
                    v = get(nk)
                    new[nk] = w if v is None else v + w
        else:
            raise ValueError(f"unknown variant {variant!r}")
        layer = new
        terms.append(sum(layer.values()))
    return CoefficientSeries(terms, first_index=1)


# ---------------------------------------------------------------------------
# memoized recursion with an introspectable cache
# ---------------------------------------------------------------------------

@dataclass
class MemoCache:
    """Value cache for a set-state recursion, keyed by (n, a, l, S-bitmask).

    Values never change once inserted; base-case keys (n = 0, value 1) are
    not stored.
    """

    variant: str
    data: dict = field(default_factory=dict)
    hits: int = 0
    misses: int = 0

    def __len__(self):
        return len(self.data)

    def value(self, n, a, l, S):
        return suffix_count(self.variant, n, a, l, S, cache=self)


def suffix_count(variant, n, a, l, S, cache=None):
    """f(n, a, l, S) for the given recursion variant, memoized.

    S may be an iterable of values or a bitmask int.
    """
    if not isinstance(S, int):
        S = bitset(S)
    if cache is None:
        cache = MemoCache(variant)
    elif cache.variant != variant:
        raise ValueError(f"cache belongs to variant {cache.variant!r}")
    children = _CHILDREN[variant]
    data = cache.data
    root = (n, a, l, S)
    if n == 0:
        return 1
    stack = [root]
    while stack:
        key = stack[-1]
        if key in data:
            cache.hits += 1
            stack.pop()
            continue
        kn, ka, kl, kS = key
        kids = children(ka, kl, kS)
        total = 0
        pending = False
        for ca, cl, cS in kids:
            if kn == 1:
                total += 1
                continue
            ck = (kn - 1, ca, cl, cS)
            v = data.get(ck)
            if v is None:
                if not pending:
                    pending = True
                stack.append(ck)
            elif not pending:
                total += v
        if not pending:
            cache.misses += 1
            data[key] = total
            stack.pop()
    return data[root]


def enumerate_with_cache(variant, n_terms, cache=None):
    """Series of avoider counts computed through the memoized recursion,
    returning the populated cache for repetition analysis."""
    if cache is None:
        cache = MemoCache(variant)
    values = [suffix_count(variant, n - 1, 0, 0, 1, cache=cache)
              for n in range(1, n_terms + 1)]
    return CoefficientSeries(values, first_index=1), cache


def enumerate_000_exponential(n_terms, allow_over_cap=False) -> CoefficientSeries:
    """000-avoider counts via the bit-set recursion (states O(n^3 2^n))."""
    _check_cap("000", n_terms, allow_over_cap)
    return _forward_series("000", n_terms)


def enumerate_110(n_terms, allow_over_cap=False) -> CoefficientSeries:
    """110-avoider counts; repeats erase every smaller value."""
    _check_cap("110", n_terms, allow_over_cap)
    return _forward_series("110", n_terms)


def enumerate_120(n_terms, allow_over_cap=False) -> CoefficientSeries:
    """120-avoider counts; states O(n^3 2^(n/2)) since ascents accrue half-rate."""
    _check_cap("120", n_terms, allow_over_cap)
    return _forward_series("120", n_terms)


def enumerate_avoiders(pattern, n_terms, algorithm="dp",
                       allow_over_cap=False) -> CoefficientSeries:
    """Dispatch: pattern in {'000','100','110','120'} to its best enumerator."""
    key = "".join(str(v) for v in pattern) if not isinstance(pattern, str) else pattern
    capped = {"000-exp": enumerate_000_exponential, "110": enumerate_110,
              "120": enumerate_120}
    if key not in ("000", "100", "110", "120"):
        raise ValueError(f"no dynamic-programming enumerator for pattern {key!r}")
    if algorithm == "dp-exp":
        if key == "000":
            return enumerate_000_exponential(n_terms, allow_over_cap=allow_over_cap)
        if key in ("110", "120"):
            return capped[key](n_terms, allow_over_cap=allow_over_cap)
        raise ValueError(f"no exponential-state variant for pattern {key!r}")
    if algorithm == "dp-poly":
        if key != "000":
            raise ValueError(f"no polynomial compacted variant for pattern {key!r}")
        return enumerate_000_polynomial(n_terms)
    if key == "000":
        return enumerate_000_polynomial(n_terms)
    if key == "100":
        return enumerate_100(n_terms)
    return capped[key](n_terms, allow_over_cap=allow_over_cap)


# ---------------------------------------------------------------------------
# cache repetition analysis
# ---------------------------------------------------------------------------

def _proj_full(key):
    return key


def _proj_cardinality(key):
    return (key[0], key[1], key[2], key[3].bit_count())


def _proj_drop_l(key):
    return (key[0], key[1], key[3].bit_count())


def _proj_drop_a(key):
    return (key[0], key[2], key[3].bit_count())


def _proj_drop_set(key):
    return (key[0], key[1], key[2])


CANDIDATE_PROJECTIONS = {
    "n,a,l,|S|": _proj_cardinality,
    "n,a,|S|": _proj_drop_l,
    "n,l,|S|": _proj_drop_a,
    "n,a,l": _proj_drop_set,
}


@dataclass
class RepetitionReport:
    variant: str
    projection_name: str
    total_keys: int
    groups: dict                  # projected key -> Counter(value -> multiplicity)
    single_valued_fraction: float
    candidate_fractions: dict     # projection name -> fraction single-valued
    collision_candidates: list    # names with fraction >= threshold

    def multi_valued_groups(self):
        return {k: c for k, c in self.groups.items() if len(c) > 1}


def cache_repetition_report(cache: MemoCache, group_by="n,a,l,|S|",
                            candidates=None, threshold=0.99) -> RepetitionReport:
    """Group cached values by a key projection and measure how often a group
    holds a single distinct value. Projections where at least `threshold` of
    groups are single-valued are collision candidates: the recursion likely
    depends only on the projected state."""
    if not cache.data:
        raise ValueError("cache is empty; run an enumeration through it first")
    if callable(group_by):
        proj, proj_name = group_by, getattr(group_by, "__name__", "custom")
    else:
        proj_name = group_by
        proj = CANDIDATE_PROJECTIONS[group_by]
    groups = {}
    for key, value in cache.data.items():
        groups.setdefault(proj(key), Counter())[value] += 1
    single = sum(1 for c in groups.values() if len(c) == 1)
    fraction = single / len(groups)

    cand = dict(CANDIDATE_PROJECTIONS if candidates is None else candidates)
    fractions = {}
    for name, p in cand.items():
        seen = {}
        ok = True
        multi = 0
        for key, value in cache.data.items():
            pk = p(key)
            prev = seen.get(pk)
            if prev is None:
                seen[pk] = {value}
            else:
                prev.add(value)
        multi = sum(1 for vs in seen.values() if len(vs) > 1)
        fractions[name] = (len(seen) - multi) / len(seen)
    return RepetitionReport(
        variant=cache.variant,
        projection_name=proj_name,
        total_keys=len(cache.data),
        groups=groups,
        single_valued_fraction=fraction,
        candidate_fractions=fractions,
        collision_candidates=sorted(n for n, f in fractions.items() if f >= threshold),
    )
