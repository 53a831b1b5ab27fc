"""Curved A-infinity / L-infinity structures as truncated structure tensors.

A structure on V is stored through its components m_i mapping words of the
parity reversion of V to the parity reversion of V; every m_i is odd in
that convention and m_0 is the curvature, an even element of V.  The
module provides Maurer-Cartan residuals, cyclicity checks, the gauge
action by exponentials of even derivations without constant or linear
term, the contracting homotopies of the deformation complex, and the
constructive normal forms for nontrivially curved structures.

All structures are truncated at an arity cap A; components above the cap
are assumed zero, which makes every operation here exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .graded import EVEN, GradedSpace, GradedError, InnerProduct, _invert_matrix
from .tensors import (
    AINF,
    LINF,
    FLAVORS,
    Entries,
    Family,
    add_into,
    compose,
    family_bracket,
    family_compose,
    is_symmetric,
    map_parity,
    pi_parities,
    scaled,
    symmetrize,
)

Vector = dict[int, Fraction]


class StructureError(ValueError):
    """Raised for malformed or inconsistent structure data."""


# ---------------------------------------------------------------------------
# data types


@dataclass
class CochainFamily:
    """Arity-indexed family of maps on the reversed space, of one parity."""

    space: GradedSpace
    flavor: str
    parity: int
    components: Family = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.flavor not in FLAVORS:
            raise StructureError(f"unknown flavor {self.flavor!r}")
        pp = pi_parities(self.space.parities)
        clean: Family = {}
        for arity, entries in self.components.items():
            entries = {k: v for k, v in entries.items() if v}
            if not entries:
                continue
            p = map_parity(entries, pp)
            if p is not None and p != self.parity:
                raise StructureError(
                    f"arity-{arity} component has parity {p}, expected {self.parity}"
                )
            for (word, out), _ in entries.items():
                if len(word) != arity:
                    raise StructureError("word length disagrees with arity")
                if not (0 <= out < self.space.dim) or any(
                    not (0 <= b < self.space.dim) for b in word
                ):
                    raise StructureError("basis index out of range")
            if self.flavor == LINF and not is_symmetric(entries, arity, pp):
                raise StructureError(f"arity-{arity} component is not symmetric")
            clean[arity] = entries
        self.components = clean

    def component(self, arity: int) -> Entries:
        return self.components.get(arity, {})

    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CochainFamily):
            return NotImplemented
        return (
            self.space == other.space
            and self.flavor == other.flavor
            and self.components == other.components
        )


@dataclass
class InfinityStructure:
    """A curved structure: odd tensors m_0 .. m_cap on the reversed space."""

    space: GradedSpace
    flavor: str
    cap: int
    ops: Family = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.cap < 1:
            raise StructureError("arity cap must be positive")
        fam = CochainFamily(self.space, self.flavor, 1, dict(self.ops))
        if any(a > self.cap or a < 0 for a in fam.components):
            raise StructureError("component arity outside 0..cap")
        self.ops = fam.components

    @property
    def curvature(self) -> Vector:
        return {out: c for (_, out), c in self.ops.get(0, {}).items()}

    def as_family(self) -> CochainFamily:
        return CochainFamily(self.space, self.flavor, 1, dict(self.ops))

    def component(self, arity: int) -> Entries:
        return self.ops.get(arity, {})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, InfinityStructure):
            return NotImplemented
        return (
            self.space == other.space
            and self.flavor == other.flavor
            and self.cap == other.cap
            and self.ops == other.ops
        )


@dataclass
class GaugeElement:
    """Even derivation data with no constant and no linear term, plus an
    optional invertible even linear map applied after the exponential."""

    space: GradedSpace
    flavor: str
    cap: int
    ops: Family = field(default_factory=dict)
    linear: tuple[tuple[Fraction, ...], ...] | None = None

    def __post_init__(self) -> None:
        fam = CochainFamily(self.space, self.flavor, 0, dict(self.ops))
        if 0 in fam.components or 1 in fam.components:
            raise StructureError("gauge element has a constant or linear term")
        if any(a > self.cap for a in fam.components):
            raise StructureError("gauge component above cap")
        self.ops = fam.components
        if self.linear is not None:
            n = self.space.dim
            if len(self.linear) != n or any(len(r) != n for r in self.linear):
                raise StructureError("linear layer has wrong shape")
            par = self.space.parities
            for i in range(n):
                for j in range(n):
                    if par[i] != par[j] and self.linear[i][j] != 0:
                        raise StructureError("linear layer is not even")
            _invert_matrix([list(r) for r in self.linear])  # must be invertible

    def negated(self) -> "GaugeElement":
        """Inverse of the exponential layer (only valid when linear is None)."""
        if self.linear is not None:
            raise StructureError("cannot negate a gauge with a linear layer")
        return GaugeElement(
            self.space,
            self.flavor,
            self.cap,
            {a: scaled(e, Fraction(-1)) for a, e in self.ops.items()},
        )


# ---------------------------------------------------------------------------
# Maurer-Cartan and the gauge action


def mc_residual(m: InfinityStructure) -> CochainFamily:
    """Arity components of the derivation square of m, through cap - 1.

    The structure satisfies its defining quadratic relations through the
    cap exactly when every returned component vanishes.
    """
    pp = pi_parities(m.space.parities)
    res = family_compose(m.flavor, m.ops, m.ops, 1, pp, m.cap - 1)
    return CochainFamily(m.space, m.flavor, 0, res)


def is_mc(m: InfinityStructure) -> bool:
    return mc_residual(m).is_zero()


def apply_gauge(m: InfinityStructure, g: GaugeElement) -> InfinityStructure:
    """Conjugate m by the exponential of g, then by its linear layer.

    Because g has no constant or linear term, each bracket with g strictly
    raises arity, so the exponential series is a finite sum in every arity
    and the result is exact through the cap.
    """
    if g.space != m.space or g.flavor != m.flavor:
        raise StructureError("gauge and structure live on different data")
    pp = pi_parities(m.space.parities)
    total: Family = {a: dict(e) for a, e in m.ops.items()}
    term: Family = m.ops
    n = 0
    while term:
        n += 1
        term = family_bracket(m.flavor, g.ops, 0, term, 1, pp, m.cap)
        term = {a: scaled(e, Fraction(1, n)) for a, e in term.items()}
        term = {a: e for a, e in term.items() if e}
        for a, e in term.items():
            bucket = total.setdefault(a, {})
            add_into(bucket, e)
        if n > 2 * m.cap + 4:
            raise StructureError("gauge exponential failed to terminate")
    total = {a: e for a, e in total.items() if e}
    if g.linear is not None:
        total = _conjugate_linear(total, g.linear, m.space)
    return InfinityStructure(m.space, m.flavor, m.cap, total)


def _conjugate_linear(
    ops: Family, lin: tuple[tuple[Fraction, ...], ...], space: GradedSpace
) -> Family:
    inv = _invert_matrix([list(r) for r in lin])
    out: Family = {}
    for arity, entries in ops.items():
        new: Entries = {}
        for (word, o), coeff in entries.items():
            # expand L o m o (L^{-1})^{otimes arity} on basis words
            choices: list[tuple[tuple[int, ...], Fraction]] = [((), coeff)]
            for b in word:
                nxt = []
                for prefix, cf in choices:
                    for bb in range(space.dim):
                        f = inv[b][bb]
                        if f:
                            nxt.append((prefix + (bb,), cf * f))
                choices = nxt
            for oo in range(space.dim):
                lo = lin[oo][o]
                if not lo:
                    continue
                for wrd, cf in choices:
                    key = (wrd, oo)
                    val = new.get(key, Fraction(0)) + cf * lo
                    if val:
                        new[key] = val
                    else:
                        new.pop(key, None)
        if new:
            out[arity] = new
    return out


# ---------------------------------------------------------------------------
# cyclic structures


def map_to_tensor(entries: Entries, arity: int, ip: InnerProduct) -> dict[tuple[int, ...], Fraction]:
    """Pair the output slot against a final argument: T(w, v) = (f(w), v)."""
    out: dict[tuple[int, ...], Fraction] = {}
    n = ip.space.dim
    for (word, o), c in entries.items():
        for v in range(n):
            g = ip.gram[o][v]
            if g:
                key = word + (v,)
                val = out.get(key, Fraction(0)) + c * g
                if val:
                    out[key] = val
                else:
                    out.pop(key, None)
    return out


def tensor_to_map(tensor: dict[tuple[int, ...], Fraction], ip: InnerProduct) -> Entries:
    """Inverse of map_to_tensor (uses the inverse gram matrix)."""
    inv = ip._inv  # type: ignore[attr-defined]
    out: Entries = {}
    n = ip.space.dim
    for word, c in tensor.items():
        w, v = word[:-1], word[-1]
        for o in range(n):
            f = inv[v][o]
            if f:
                key = (w, o)
                val = out.get(key, Fraction(0)) + c * f
                if val:
                    out[key] = val
                else:
                    out.pop(key, None)
    return out


def rotate_tensor(
    tensor: dict[tuple[int, ...], Fraction], space: GradedSpace
) -> dict[tuple[int, ...], Fraction]:
    """One signed cyclic rotation of an (i+1)-slot structure tensor.

    The sign is the Koszul sign, in the parities of the reversed space, of
    carrying the last argument past all the others; the fixed points of
    this operator are exactly the cyclic tensors.  (Checked: with this and
    only this sign rule do cyclic families close under the derivation
    bracket and stay cyclic under the curvature-insertion differential.)
    """
    pp = pi_parities(space.parities)
    out: dict[tuple[int, ...], Fraction] = {}
    for word, c in tensor.items():
        target = word[1:] + (word[0],)
        s = (pp[target[-1]] * sum(pp[b] for b in target[:-1])) % 2
        val = out.get(target, Fraction(0)) + (-c if s else c)
        if val:
            out[target] = val
        else:
            out.pop(target, None)
    return out


def cyclic_violation(
    m: InfinityStructure, ip: InnerProduct
) -> tuple[int, tuple[int, ...]] | None:
    """First (arity, word) at which the cyclic-invariance relation fails."""
    if ip.space != m.space:
        raise StructureError("inner product lives on a different space")
    for arity in sorted(m.ops):
        entries = m.ops[arity]
        tensor = map_to_tensor(entries, arity, ip)
        rotated = rotate_tensor(tensor, m.space)
        keys = sorted(set(tensor) | set(rotated))
        for key in keys:
            if tensor.get(key, Fraction(0)) != rotated.get(key, Fraction(0)):
                return arity, key
    return None


def is_cyclic(m: InfinityStructure, ip: InnerProduct) -> bool:
    """True when every structure tensor is invariant under the signed
    cyclic permutation of its arguments."""
    return cyclic_violation(m, ip) is None


def cyclic_symmetrize(
    entries: Entries, arity: int, ip: InnerProduct
) -> Entries:
    """Average of all signed rotations; a projector onto cyclic tensors."""
    tensor = map_to_tensor(entries, arity, ip)
    total: dict[tuple[int, ...], Fraction] = dict(tensor)
    current = tensor
    for _ in range(arity):
        current = rotate_tensor(current, ip.space)
        for k, v in current.items():
            val = total.get(k, Fraction(0)) + v
            if val:
                total[k] = val
            else:
                total.pop(k, None)
    avg = {k: v / (arity + 1) for k, v in total.items() if v}
    return tensor_to_map(avg, ip)


# ---------------------------------------------------------------------------
# the deformation complex: differential and homotopies


def _check_curvature_vector(space: GradedSpace, c: Vector) -> Vector:
    c = {b: Fraction(v) for b, v in c.items() if v}
    if not c:
        raise StructureError("curvature element is zero")
    if any(space.parities[b] != EVEN for b in c):
        raise StructureError("curvature element is not even")
    return c


def curved_differential(f: CochainFamily, c: Vector) -> CochainFamily:
    """Insert the curvature into every slot (signed); lowers arity by one."""
    c = _check_curvature_vector(f.space, c)
    pp = pi_parities(f.space.parities)
    const: Entries = {((), b): v for b, v in c.items()}
    out: Family = {}
    for arity, entries in f.components.items():
        if arity == 0:
            continue
        piece = compose(f.flavor, entries, arity, const, 0, 1, pp)
        if piece:
            bucket = out.setdefault(arity - 1, {})
            add_into(bucket, piece)
    return CochainFamily(f.space, f.flavor, 1 - f.parity, out)


def _check_eps(space: GradedSpace, eps: Vector, c: Vector | None) -> Vector:
    eps = {b: Fraction(v) for b, v in eps.items() if v}
    if any(space.parities[b] != EVEN for b in eps):
        raise StructureError("the functional must vanish on the odd part of V")
    if c is not None:
        val = sum(eps.get(b, Fraction(0)) * v for b, v in c.items())
        if val != 1:
            raise StructureError("the functional must take value 1 on the curvature")
    return eps


def homotopy_s(f: CochainFamily, eps: Vector, c: Vector | None = None) -> CochainFamily:
    """Contracting homotopy of the curvature-insertion differential.

    Extracts the distinguished functional from the first slot (associative
    flavor) or from every slot with Koszul signs (symmetric flavor), so
    that d s + s d is the identity in every arity.
    """
    eps = _check_eps(f.space, eps, c)
    pp = pi_parities(f.space.parities)
    out: Family = {}
    for arity, entries in f.components.items():
        new: Entries = {}
        positions = (0,) if f.flavor == AINF else tuple(range(arity + 1))
        for (word, o), coeff in entries.items():
            for b, eb in eps.items():
                for pos in positions:
                    # sign: move the extracted slot to the front
                    s = sum(pp[x] for x in word[:pos]) % 2 if pp[b] else 0
                    key = (word[:pos] + (b,) + word[pos:], o)
                    val = new.get(key, Fraction(0)) + (-coeff if s else coeff) * eb
                    if val:
                        new[key] = val
                    else:
                        new.pop(key, None)
        if new:
            out[arity + 1] = new
    return CochainFamily(f.space, f.flavor, 1 - f.parity, out)


def cyclic_homotopy_sprime(
    f: CochainFamily, ip: InnerProduct, c: Vector, cprime: Vector
) -> CochainFamily:
    """Cyclic analogue of the contracting homotopy on cyclic families.

    Associative flavor: the sum of all signed cyclic rotations of the
    one-slot extraction homotopy -- on the structure tensor, prepend the
    functional (c', -) and sum the rotations.  Maps cyclic families to
    cyclic families, and d s' + s' d acts as multiplication by k on the
    piece whose tensors carry exactly k slots outside the (c', -) line.

    Symmetric flavor: on symmetric tensors the rotation sum collapses (up
    to symmetrization) to the plain extraction homotopy, which already
    contracts every arity >= 1; we return that, so d s' + s' d is the
    identity there.
    """
    c = _check_curvature_vector(f.space, c)
    cprime = {b: Fraction(v) for b, v in cprime.items() if v}
    if any(f.space.parities[b] != EVEN for b in cprime):
        raise StructureError("c' must be even")
    pair_cc = sum(
        ca * cb * ip.gram[a][b] for a, ca in c.items() for b, cb in cprime.items()
    )
    if pair_cc != 1:
        raise StructureError("(c, c') must equal 1")
    eps: Vector = {}
    for b in range(f.space.dim):
        val = sum(ca * ip.gram[a][b] for a, ca in cprime.items())
        if val:
            eps[b] = val
    if f.flavor == LINF:
        return homotopy_s(f, eps, c)
    out: Family = {}
    for arity, entries in f.components.items():
        tensor = map_to_tensor(entries, arity, ip)
        # prepend the eps slot: (eps tensor_prod T)(x_1, .., x_{arity+2})
        lifted: dict[tuple[int, ...], Fraction] = {}
        for word, val in tensor.items():
            for b, eb in eps.items():
                key = (b,) + word
                tot = lifted.get(key, Fraction(0)) + eb * val
                if tot:
                    lifted[key] = tot
                else:
                    lifted.pop(key, None)
        total: dict[tuple[int, ...], Fraction] = dict(lifted)
        current = lifted
        for _ in range(arity + 1):
            current = rotate_tensor(current, f.space)
            for k, v in current.items():
                tot = total.get(k, Fraction(0)) + v
                if tot:
                    total[k] = tot
                else:
                    total.pop(k, None)
        new = tensor_to_map(total, ip)
        if new:
            out[arity + 1] = new
    return CochainFamily(f.space, f.flavor, 1 - f.parity, out)


# ---------------------------------------------------------------------------
# slotwise decomposition of cyclic tensors by content


def _slot_basis(space: GradedSpace, ip: InnerProduct, c: Vector, cprime: Vector):
    """Rows of the functional basis (eps first, then a basis of functionals
    vanishing on the curvature) and the matching dual-vector matrix."""
    d = space.dim
    eps_row = [
        sum(ca * ip.gram[a][b] for a, ca in cprime.items()) for b in range(d)
    ]
    rows = [eps_row]
    # complete with functionals vanishing on c, by elimination on the
    # coordinates of c with lowest-index pivots
    cvec = [c.get(b, Fraction(0)) for b in range(d)]
    pivot = min(b for b in range(d) if cvec[b])
    for b in range(d):
        if b == pivot:
            continue
        row = [Fraction(0)] * d
        row[b] = Fraction(1)
        row[pivot] = -cvec[b] / cvec[pivot]
        rows.append(row)
    mat = [list(r) for r in rows]
    dual = _invert_matrix(mat)  # dual[b][s]: coordinate b of dual vector s
    return rows, dual


def content_decomposition(
    entries: Entries, arity: int, ip: InnerProduct, c: Vector, cprime: Vector
) -> dict[int, Entries]:
    """Split a family component by how many tensor slots avoid eps.

    Expands the structure tensor slotwise in the basis {eps} + {functionals
    vanishing on the curvature} and groups terms by the count of non-eps
    factors.  Component 0 is spanned by the pure eps power.
    """
    space = ip.space
    rows, dual = _slot_basis(space, ip, c, cprime)
    tensor = map_to_tensor(entries, arity, ip)
    n = arity + 1
    # coefficients in the new basis: evaluate on dual vectors slotwise
    coeff: dict[tuple[int, ...], Fraction] = {}
    for word, val in tensor.items():
        expansions: list[tuple[tuple[int, ...], Fraction]] = [((), val)]
        for b in word:
            nxt = []
            for prefix, cf in expansions:
                for s in range(space.dim):
                    dv = dual[b][s]
                    if dv:
                        nxt.append((prefix + (s,), cf * dv))
            expansions = nxt
        for sword, cf in expansions:
            tot = coeff.get(sword, Fraction(0)) + cf
            if tot:
                coeff[sword] = tot
            else:
                coeff.pop(sword, None)
    pieces: dict[int, dict[tuple[int, ...], Fraction]] = {}
    for sword, cf in coeff.items():
        k = sum(1 for s in sword if s != 0)
        # reconstruct the delta-coordinate tensor of this monomial
        expansions = [((), cf)]
        for s in sword:
            nxt = []
            for prefix, c0 in expansions:
                for b in range(space.dim):
                    rv = rows[s][b]
                    if rv:
                        nxt.append((prefix + (b,), c0 * rv))
            expansions = nxt
        bucket = pieces.setdefault(k, {})
        for word, c0 in expansions:
            tot = bucket.get(word, Fraction(0)) + c0
            if tot:
                bucket[word] = tot
            else:
                bucket.pop(word, None)
    return {
        k: tensor_to_map(t, ip) for k, t in sorted(pieces.items()) if t
    }


def harmonic_part(
    entries: Entries, arity: int, ip: InnerProduct, c: Vector, cprime: Vector
) -> tuple[Fraction, Entries]:
    """Coefficient and map of the pure-eps component of a cyclic tensor.

    The coefficient equals the tensor evaluated on the all-curvature word,
    and the map sends a word to the product of eps values times c'.
    """
    tensor = map_to_tensor(entries, arity, ip)
    coeff = Fraction(0)
    for word, val in tensor.items():
        prod = val
        for b in word:
            prod *= c.get(b, Fraction(0))
            if not prod:
                break
        coeff += prod
    return coeff, scaled(_eps_power_map(arity, ip, c, cprime), coeff)


def _eps_power_map(arity: int, ip: InnerProduct, c: Vector, cprime: Vector) -> Entries:
    """Map sending (x_1..x_arity) to eps(x_1)..eps(x_arity) c'."""
    space = ip.space
    eps: Vector = {}
    for b in range(space.dim):
        val = sum(ca * ip.gram[a][b] for a, ca in cprime.items())
        if val:
            eps[b] = val
    words: list[tuple[tuple[int, ...], Fraction]] = [((), Fraction(1))]
    for _ in range(arity):
        words = [
            (w + (b,), cf * eb) for w, cf in words for b, eb in eps.items()
        ]
    out: Entries = {}
    for w, cf in words:
        for b, cb in cprime.items():
            val = cf * cb
            if val:
                out[(w, b)] = out.get((w, b), Fraction(0)) + val
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# distinguished functionals


def default_eps(space: GradedSpace, c: Vector) -> Vector:
    """Dual functional to the curvature after extending it to a basis.

    Deterministic: the pivot is the lowest even basis index carrying a
    nonzero coefficient of c.
    """
    c = _check_curvature_vector(space, c)
    pivot = min(c)
    return {pivot: Fraction(1) / c[pivot]}


def default_cprime(ip: InnerProduct, c: Vector) -> Vector:
    """Even element with (c, c') = 1; lowest-index deterministic choice."""
    c = _check_curvature_vector(ip.space, c)
    for b in range(ip.space.dim):
        if ip.space.parities[b] != EVEN:
            continue
        val = sum(ca * ip.gram[a][b] for a, ca in c.items())
        if val:
            return {b: Fraction(1) / val}
    raise StructureError("no even element pairs nontrivially with the curvature")


# ---------------------------------------------------------------------------
# normal forms


def normal_form_plain(m: InfinityStructure) -> tuple[InfinityStructure, GaugeElement]:
    """Reduce a nontrivially curved structure to curvature alone.

    Arity-by-arity homological perturbation: the lowest surviving component
    above arity zero is a cycle for the curvature-insertion differential,
    and gauging by minus its homotopy preimage removes it without touching
    lower arities.  Terminates after at most cap steps.
    """
    c = m.curvature
    if not c:
        raise StructureError("normal form requires nonzero curvature")
    eps = default_eps(m.space, c)
    xi = GaugeElement(m.space, m.flavor, m.cap + 1, {})
    current = m
    for k in range(1, m.cap + 1):
        comp = current.component(k)
        if not comp:
            continue
        fam = CochainFamily(m.space, m.flavor, 1, {k: comp})
        pre = homotopy_s(fam, eps, c)
        step = scaled(pre.component(k + 1), Fraction(-1))
        new_ops = {a: dict(e) for a, e in xi.ops.items()}
        bucket = new_ops.setdefault(k + 1, {})
        add_into(bucket, step)
        xi = GaugeElement(m.space, m.flavor, m.cap + 1, new_ops)
        current = apply_gauge(m, xi)
        if current.component(k):
            raise StructureError(
                f"perturbation step failed to clear arity {k}"
            )
    return current, xi


def normal_form_cyclic(
    m: InfinityStructure,
    ip: InnerProduct,
    cprime: Vector | None = None,
) -> tuple[InfinityStructure, GaugeElement, tuple[Fraction, ...]]:
    """Reduce a cyclic nontrivially curved structure to its canonical form.

    Uses the cyclic homotopy rescaled by 1/k on the content-k pieces to
    remove everything outside the pure-eps line; what survives at even
    arity 2i is the invariant (m_{2i}(c,..,c), c) times the canonical
    even-ary operation built from c'.  Returns those invariants, indexed
    by i = 1, 2, .., through the cap.  In the symmetric flavor the
    harmonic line vanishes identically and the homotopy needs no
    rescaling, so everything above arity zero is removed.
    """
    c = m.curvature
    if not c:
        raise StructureError("normal form requires nonzero curvature")
    if not is_cyclic(m, ip):
        raise StructureError("structure is not cyclic")
    if cprime is None:
        cprime = default_cprime(ip, c)
    xi = GaugeElement(m.space, m.flavor, m.cap + 1, {})
    current = m
    for k in range(1, m.cap + 1):
        comp = current.component(k)
        if not comp:
            continue
        if m.flavor == LINF:
            residual: Entries = dict(comp)
        else:
            pieces = content_decomposition(comp, k, ip, c, cprime)
            residual = {}
            for content, piece in pieces.items():
                if content == 0:
                    continue
                add_into(residual, scaled(piece, Fraction(1, content)))
        if not residual:
            continue
        fam = CochainFamily(m.space, m.flavor, 1, {k: residual})
        pre = cyclic_homotopy_sprime(fam, ip, c, cprime)
        step = scaled(pre.component(k + 1), Fraction(-1))
        new_ops = {a: dict(e) for a, e in xi.ops.items()}
        bucket = new_ops.setdefault(k + 1, {})
        add_into(bucket, step)
        xi = GaugeElement(m.space, m.flavor, m.cap + 1, new_ops)
        current = apply_gauge(m, xi)
        if m.flavor == LINF:
            bad = bool(current.component(k))
        else:
            check = content_decomposition(current.component(k), k, ip, c, cprime)
            bad = any(content != 0 for content in check)
        if bad:
            raise StructureError(f"cyclic perturbation failed to clear arity {k}")
    # The complete gauge invariants are the coefficients of the reduced
    # form.  (The same evaluation on a structure that is not already in
    # normal form is not constant along gauge orbits; see the notes in
    # normal-form tests.)
    invariants = []
    for i in range(1, m.cap // 2 + 1):
        coeff, _ = harmonic_part(current.component(2 * i), 2 * i, ip, c, cprime)
        invariants.append(coeff)
    return current, xi, tuple(invariants)


# ---------------------------------------------------------------------------
# model algebras


def model_algebra(
    kind: str, i: int = 0, t: tuple[Fraction, ...] = (), cap: int | None = None,
    flavor: str = AINF,
) -> tuple[InfinityStructure, InnerProduct]:
    """The one- and two-dimensional cyclic curved model algebras.

    kind "V":      one even generator c, (c,c)=1, m_0=c and
                   m_{2j}(c,..,c) = t_j c for the given sequence t.
    kind "Vprime": even generators c, c' with hyperbolic pairing,
                   m_0 = c and m_{2j}(c,..,c) = t_j c'.
    kind "V(i)":   shorthand for "V" with a single 1 in slot i (i >= 1),
                   or the bare curvature when i = 0.
    """
    one = Fraction(1)
    if kind == "V(i)":
        kind = "V"
        t = tuple(one if (j + 1) == i else Fraction(0) for j in range(max(i, 0)))
    if kind == "V":
        space = GradedSpace.of(1, 0)
        ip = InnerProduct.from_rows(space, [[1]])
        ops: Family = {0: {((), 0): one}}
        for j, tv in enumerate(t, start=1):
            if tv:
                ops[2 * j] = {((0,) * (2 * j), 0): Fraction(tv)}
        A = cap if cap is not None else max(2 * len(t) + 1, 2)
    elif kind == "Vprime":
        space = GradedSpace.of(2, 0)
        ip = InnerProduct.from_rows(space, [[0, 1], [1, 0]])
        ops = {0: {((), 0): one}}
        for j, tv in enumerate(t, start=1):
            if tv:
                ops[2 * j] = {((0,) * (2 * j), 1): Fraction(tv)}
        A = cap if cap is not None else max(2 * len(t) + 1, 2)
    else:
        raise StructureError(f"unknown model kind {kind!r}")
    if flavor == LINF:
        # higher even-ary entries on a repeated odd generator symmetrize to
        # zero, leaving the bare curvature
        pp = pi_parities(space.parities)
        ops = {
            a: se
            for a, e in ops.items()
            if (se := (symmetrize(e, a, pp) if a >= 2 else e))
        }
    return InfinityStructure(space, flavor, A, ops), ip


# ---------------------------------------------------------------------------
# serialization: reduced p/q strings, bit-exact round trip


def _frac_str(x: Fraction) -> str:
    return str(x)


def _frac_parse(s: str) -> Fraction:
    return Fraction(s)


def structure_to_json(
    m: InfinityStructure, ip: InnerProduct | None = None
) -> str:
    doc: dict = {
        "flavor": m.flavor,
        "dim_even": m.space.dim_even,
        "dim_odd": m.space.dim_odd,
        "arity_cap": m.cap,
        "ops": {
            str(a): [
                {"inputs": list(word), "output": out, "coeff": _frac_str(cf)}
                for (word, out), cf in sorted(e.items())
            ]
            for a, e in sorted(m.ops.items())
        },
    }
    if ip is not None:
        doc["inner_product"] = [
            [_frac_str(x) for x in row] for row in ip.gram
        ]
    return json.dumps(doc, indent=2, sort_keys=True)


def structure_from_json(text: str) -> tuple[InfinityStructure, InnerProduct | None]:
    doc = json.loads(text)
    for key in ("flavor", "dim_even", "dim_odd", "arity_cap", "ops"):
        if key not in doc:
            raise StructureError(f"missing field {key!r}")
    space = GradedSpace.of(int(doc["dim_even"]), int(doc["dim_odd"]))
    ops: Family = {}
    for a_str, items in doc["ops"].items():
        arity = int(a_str)
        entries: Entries = {}
        for item in items:
            key = (tuple(int(b) for b in item["inputs"]), int(item["output"]))
            if len(key[0]) != arity:
                raise StructureError("entry word length disagrees with arity")
            val = entries.get(key, Fraction(0)) + _frac_parse(item["coeff"])
            if val:
                entries[key] = val
            else:
                entries.pop(key, None)
        if entries:
            ops[arity] = entries
    m = InfinityStructure(space, doc["flavor"], int(doc["arity_cap"]), ops)
    ip = None
    if doc.get("inner_product") is not None:
        ip = InnerProduct.from_rows(
            space, [[_frac_parse(x) for x in row] for row in doc["inner_product"]]
        )
    return m, ip
