"""Ground-truth combinatorics: ascent sequences, pattern containment, and
exhaustive counting oracles.

Sequences are plain tuples of non-negative integers. A pattern is a word whose
distinct letters form 0..r after deduplication (000, 100, 110, 120, 201, ...).
An occurrence of a pattern in a sequence is a subsequence with the same
relative order, equalities included.
"""

from __future__ import annotations

import warnings
from itertools import combinations

from .errors import CapExceededError
from .series import CoefficientSeries

ORACLE_CAP = 15


def ascent_count(seq) -> int:
    """Number of adjacent strictly-rising pairs."""
    return sum(1 for a, b in zip(seq, seq[1:]) if a < b)


def is_ascent_sequence(seq) -> bool:
    """First letter 0, each later letter at most one more than the ascents before it."""
    if not seq:
        return True
    if seq[0] != 0:
        return False
    asc = 0
    for prev, cur in zip(seq, seq[1:]):
        if cur < 0 or cur > asc + 1:
            return False
        if prev < cur:
            asc += 1
    return True


def is_weak_ascent_sequence(seq) -> bool:
    """Maximum letter bounded by the total ascent count."""
    if not seq:
        return True
    return max(seq) <= ascent_count(seq)


def parse_pattern(text) -> tuple:
    if isinstance(text, str):
        pattern = tuple(int(ch) for ch in text)
    else:
        pattern = tuple(int(v) for v in text)
    validate_pattern(pattern)
    return pattern


def validate_pattern(pattern):
    """Letters must form a contiguous value set starting at 0."""
    if any(v < 0 for v in pattern):
        raise ValueError("pattern letters must be non-negative")
    distinct = sorted(set(pattern))
    if distinct and distinct != list(range(len(distinct))):
        raise ValueError(f"pattern letters must form 0..{len(distinct) - 1}: {pattern}")
    return pattern


def _cmp(a, b):
    return (a > b) - (a < b)


def contains_pattern(seq, pattern) -> bool:
    """True iff some subsequence of seq is order-isomorphic to pattern
    (strict inequalities and equalities both preserved)."""
    k = len(pattern)
    if k == 0:
        return True
    if len(seq) < k:
        return False
    chosen = []

    def rec(start):
        j = len(chosen)
        if j == k:
            return True
        for idx in range(start, len(seq) - (k - j) + 1):
            v = seq[idx]
            if all(_cmp(v, c) == _cmp(pattern[j], pattern[a]) for a, c in enumerate(chosen)):
                chosen.append(v)
                if rec(idx + 1):
                    return True
                chosen.pop()
        return False

    return rec(0)


def pattern_occurrences(seq, pattern) -> int:
    """Number of occurrences (index sets) of pattern in seq. Exhaustive; meant
    for short sequences."""
    k = len(pattern)
    count = 0
    for idxs in combinations(range(len(seq)), k):
        if all(_cmp(seq[i], seq[j]) == _cmp(pattern[a], pattern[b])
               for (a, i), (b, j) in combinations(enumerate(idxs), 2)):
            count += 1
    return count


def weak_reverse_complement(seq) -> tuple:
    """Reverse the sequence and flip each letter within [min, max].

    An involution that preserves ascent count, min and max, maps weak ascent
    sequences to weak ascent sequences, and swaps 120-containment with
    201-containment.
    """
    if not seq:
        raise ValueError("weak_reverse_complement requires a non-empty sequence")
    hi, lo = max(seq), min(seq)
    return tuple(hi + lo - v for v in reversed(seq))


def direct_sum_concat(c1, c2) -> tuple:
    """c1 followed by c2 shifted up by max(c1).

    Both inputs must be ascent sequences; the result is one, and it avoids any
    sum-indecomposable pattern both inputs avoid.
    """
    if not is_ascent_sequence(c1) or not is_ascent_sequence(c2):
        raise ValueError("direct_sum_concat requires ascent sequences")
    if not c1:
        return tuple(c2)
    if not c2:
        return tuple(c1)
    shift = max(c1)
    return tuple(c1) + tuple(v + shift for v in c2)


def ascent_sequences(length):
    """Yield every ascent sequence of the given length."""
    if length == 0:
        yield ()
        return

    def rec(prefix, asc):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        last = prefix[-1]
        for x in range(asc + 2):
            prefix.append(x)
            yield from rec(prefix, asc + (1 if last < x else 0))
            prefix.pop()

    yield from rec([0], 0)


def weak_ascent_sequences(length):
    """Yield every weak ascent sequence of the given length.

    Letters are not capped by the running ascent count; a prefix survives as
    long as future ascents (at most one per remaining letter) can still lift
    the ascent total up to the running maximum.
    """
    if length == 0:
        yield ()
        return

    def rec(prefix, asc, hi):
        depth = len(prefix)
        if depth == length:
            if hi <= asc:
                yield tuple(prefix)
            return
        remaining = length - depth - 1
        last = prefix[-1]
        limit = asc + 1 + remaining
        for x in range(max(hi, limit) + 1):
            nasc = asc + (1 if last < x else 0)
            if max(hi, x) > nasc + remaining:
                continue
            prefix.append(x)
            yield from rec(prefix, nasc, max(hi, x))
            prefix.pop()

    for first in range(length):
        if first > length - 1:
            break
        yield from rec([first], 0, first)


def _completion_masks(pattern, width):
    """For each candidate letter x, the bitset of earlier value-pairs (u, v)
    whose relative order together with x realizes the 3-letter pattern."""
    p0, p1, p2 = pattern
    r01, r02, r12 = _cmp(p0, p1), _cmp(p0, p2), _cmp(p1, p2)
    masks = [0] * width
    for x in range(width):
        m = 0
        for u in range(width):
            if _cmp(u, x) != r02:
                continue
            for v in range(width):
                if _cmp(u, v) == r01 and _cmp(v, x) == r12:
                    m |= 1 << (u * width + v)
        masks[x] = m
    return masks


def brute_force_avoiders(pattern, n_terms, weak=False, oracle_cap=ORACLE_CAP,
                         allow_over_cap=False) -> CoefficientSeries:
    """Exhaustive counts of pattern-avoiding (weak) ascent sequences of
    lengths 1..n_terms, by prefix extension with sound pruning."""
    pattern = parse_pattern(pattern)
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    if n_terms > oracle_cap:
        if not allow_over_cap:
            raise CapExceededError(
                f"oracle cap is {oracle_cap} terms (requested {n_terms}); "
                "pass allow_over_cap=True to proceed")
        warnings.warn(f"oracle run of {n_terms} terms exceeds cap {oracle_cap}")
    if len(pattern) == 3:
        counts = (_count_weak_avoiders_3(pattern, n_terms) if weak
                  else _count_avoiders_3(pattern, n_terms))
    else:
        counts = _count_avoiders_generic(pattern, n_terms, weak)
    return CoefficientSeries(counts[1:], first_index=1)


def _count_avoiders_3(pattern, n_terms):
    """DFS over ascent sequences; pruned the moment a letter would complete the
    pattern, so every visited node is an avoider."""
    width = n_terms + 1
    completes = _completion_masks(pattern, width)
    counts = [0] * (n_terms + 1)
    w = width

    def rec(depth, asc, last, base, seen, pairs):
        counts[depth] += 1
        if depth == n_terms:
            return
        for x in range(asc + 2):
            if pairs & completes[x]:
                continue
            nbase = base if (seen >> x) & 1 else base | (1 << (x * w))
            rec(depth + 1, asc + (1 if last < x else 0), x,
                nbase, seen | (1 << x), pairs | (base << x))

    rec(1, 0, 0, 1, 1, 0)
    return counts


def _count_weak_avoiders_3(pattern, n_terms):
    """Per-target-length DFS over weak ascent sequences with the same
    pattern pruning; a prefix is viable while remaining letters could still
    supply the missing ascents."""
    width = n_terms + 1
    completes = _completion_masks(pattern, width)
    counts = [0] * (n_terms + 1)
    w = width

    for k in range(1, n_terms + 1):
        def rec(depth, asc, last, hi, base, seen, pairs):
            if depth == k:
                counts[k] += 1
                return
            remaining = k - depth - 1
            for x in range(asc + 2 + remaining):
                if max(hi, x) > asc + (1 if last < x else 0) + remaining:
                    continue
                if pairs & completes[x]:
                    continue
                nbase = base if (seen >> x) & 1 else base | (1 << (x * w))
                rec(depth + 1, asc + (1 if last < x else 0), x, max(hi, x),
                    nbase, seen | (1 << x), pairs | (base << x))

        for first in range(k):
            rec(1, 0, first, first, 1 << (first * w), 1 << first, 0)
    return counts


def _count_avoiders_generic(pattern, n_terms, weak):
    """Fallback for non-length-3 patterns: containment is re-checked on each
    extension. Exponentially slower; intended for small lengths."""
    counts = [0] * (n_terms + 1)

    if not weak:
        def rec(prefix, asc):
            counts[len(prefix)] += 1
            if len(prefix) == n_terms:
                return
            last = prefix[-1]
            for x in range(asc + 2):
                prefix.append(x)
                if not contains_pattern(prefix, pattern):
                    rec(prefix, asc + (1 if last < x else 0))
                prefix.pop()

        if not contains_pattern((0,), pattern):
            rec([0], 0)
        return counts

    for k in range(1, n_terms + 1):
        for seq in weak_ascent_sequences(k):
            if not contains_pattern(seq, pattern):
                counts[k] += 1
    return counts
