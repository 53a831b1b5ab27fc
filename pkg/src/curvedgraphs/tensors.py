"""Sparse multilinear maps on the parity reversion of a graded space.

A component of arity ``a`` is a dict ``{(word, out): coeff}`` where ``word``
is a tuple of ``a`` basis indices, ``out`` a basis index and ``coeff`` a
nonzero Fraction.  Words index the parity-reversed space, so the relevant
parity of label ``b`` is ``1 - V.parities[b]``.

Two composition flavors are supported: ``ainf`` inserts into every slot of
the outer map (tensor coalgebra), ``linf`` sums over unshuffles (symmetric
coalgebra, maps must be Koszul-symmetric in their inputs).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable

Entries = dict[tuple[tuple[int, ...], int], Fraction]

AINF = "ainf"
LINF = "linf"
FLAVORS = (AINF, LINF)


def pi_parities(parities: Iterable[int]) -> tuple[int, ...]:
    return tuple(1 - p for p in parities)


def add_into(target: Entries, source: Entries, scale: Fraction = Fraction(1)) -> None:
    for key, val in source.items():
        new = target.get(key, Fraction(0)) + scale * val
        if new:
            target[key] = new
        else:
            target.pop(key, None)


def scaled(entries: Entries, scale: Fraction) -> Entries:
    if not scale:
        return {}
    return {k: scale * v for k, v in entries.items()}


def map_parity(entries: Entries, pi_par: tuple[int, ...]) -> int | None:
    """Common parity of all entries as maps of the reversed space, or None."""
    result = None
    for (word, out), _ in entries.items():
        p = (pi_par[out] + sum(pi_par[b] for b in word)) % 2
        if result is None:
            result = p
        elif result != p:
            raise ValueError("entries are not parity-homogeneous")
    return result


def _unshuffle_sign(word: tuple[int, ...], inside: tuple[int, ...],
                    pi_par: tuple[int, ...]) -> int:
    """Koszul sign of reordering ``word`` so the ``inside`` positions come first."""
    sign = 1
    inside_set = set(inside)
    for i in inside:
        for j in range(i):
            if j not in inside_set and pi_par[word[i]] and pi_par[word[j]]:
                sign = -sign
    return sign


def compose(flavor: str, f: Entries, fa: int, g: Entries, ga: int,
            g_parity: int, pi_par: tuple[int, ...]) -> Entries:
    """Single-component composition ``f o g`` of arity ``fa + ga - 1``.

    ainf: sum over insertions of g into each slot of f, with the Koszul
    sign of moving g past the preceding arguments.
    linf: sum over unshuffles feeding ga of the arguments to g (f must be
    symmetric; g's output always occupies f's first slot).
    """
    out: Entries = {}
    if not f or not g:
        return out
    g_by_out: dict[int, list[tuple[tuple[int, ...], Fraction]]] = {}
    for (wg, og), cg in g.items():
        g_by_out.setdefault(og, []).append((wg, cg))
    if flavor == AINF:
        for (wf, of), cf in f.items():
            prefix_par = 0
            for pos in range(fa):
                for wg, cg in g_by_out.get(wf[pos], ()):
                    sign = -1 if (g_parity and prefix_par) else 1
                    word = wf[:pos] + wg + wf[pos + 1:]
                    key = (word, of)
                    new = out.get(key, Fraction(0)) + sign * cf * cg
                    if new:
                        out[key] = new
                    else:
                        out.pop(key, None)
                prefix_par ^= pi_par[wf[pos]]
    elif flavor == LINF:
        if fa == 0:
            return out
        n = fa + ga - 1
        for (wf, of), cf in f.items():
            for wg, cg in g_by_out.get(wf[0], ()):
                rest = wf[1:]
                coeff = cf * cg
                for inside in combinations(range(n), ga):
                    word = [0] * n
                    it_in = iter(wg)
                    it_out = iter(rest)
                    inside_set = set(inside)
                    for k in range(n):
                        word[k] = next(it_in) if k in inside_set else next(it_out)
                    tword = tuple(word)
                    sign = _unshuffle_sign(tword, inside, pi_par)
                    key = (tword, of)
                    new = out.get(key, Fraction(0)) + sign * coeff
                    if new:
                        out[key] = new
                    else:
                        out.pop(key, None)
    else:
        raise ValueError(f"unknown flavor {flavor!r}")
    return out


Family = dict[int, Entries]


def family_compose(flavor: str, F: Family, G: Family, g_parity: int,
                   pi_par: tuple[int, ...], cap: int) -> Family:
    """All components of the derivation composition F o G, arities <= cap."""
    out: Family = {}
    for fa, f in F.items():
        for ga, g in G.items():
            n = fa + ga - 1
            if n < 0 or n > cap or not f or not g:
                continue
            piece = compose(flavor, f, fa, g, ga, g_parity, pi_par)
            if piece:
                bucket = out.setdefault(n, {})
                add_into(bucket, piece)
    return {a: e for a, e in out.items() if e}


def family_bracket(flavor: str, F: Family, f_parity: int, G: Family,
                   g_parity: int, pi_par: tuple[int, ...], cap: int) -> Family:
    """Graded commutator [F, G] = F o G - (-1)^{|F||G|} G o F."""
    out = family_compose(flavor, F, G, g_parity, pi_par, cap)
    swap = family_compose(flavor, G, F, f_parity, pi_par, cap)
    sign = Fraction(-1 if (f_parity and g_parity) else 1)
    for a, e in swap.items():
        bucket = out.setdefault(a, {})
        add_into(bucket, e, -sign)
    return {a: e for a, e in out.items() if e}


def permute_word_action(entries: Entries, perm: tuple[int, ...],
                        pi_par: tuple[int, ...]) -> Entries:
    """Action of a slot permutation with Koszul signs.

    ``perm[i] = j`` sends slot ``i`` to slot ``j``: on the new word ``w'``
    we have ``w'[perm[i]] = w[i]``, and the coefficient picks up the Koszul
    sign of the reordering.
    """
    out: Entries = {}
    for (word, o), c in entries.items():
        new = [0] * len(word)
        for i, b in enumerate(word):
            new[perm[i]] = b
        sign = 1
        for i in range(len(word)):
            for j in range(i + 1, len(word)):
                if perm[i] > perm[j] and pi_par[word[i]] and pi_par[word[j]]:
                    sign = -sign
        key = (tuple(new), o)
        val = out.get(key, Fraction(0)) + sign * c
        if val:
            out[key] = val
        else:
            out.pop(key, None)
    return out


def symmetrize(entries: Entries, arity: int, pi_par: tuple[int, ...]) -> Entries:
    """Project onto Koszul-symmetric tensors (average over all slot permutations)."""
    if arity <= 1:
        return dict(entries)
    total: Entries = {}
    count = 0
    for perm in permutations(range(arity)):
        count += 1
        add_into(total, permute_word_action(entries, perm, pi_par))
    return {k: v / count for k, v in total.items() if v}


def is_symmetric(entries: Entries, arity: int, pi_par: tuple[int, ...]) -> bool:
    if arity <= 1:
        return True
    for i in range(arity - 1):
        perm = list(range(arity))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        swapped = permute_word_action(entries, tuple(perm), pi_par)
        if swapped != entries:
            return False
    return True
