import random
from fractions import Fraction

import pytest

from curvedgraphs.graded import GradedSpace, InnerProduct
from curvedgraphs.infinity import (
    CochainFamily,
    GaugeElement,
    InfinityStructure,
    StructureError,
    apply_gauge,
    content_decomposition,
    curved_differential,
    cyclic_homotopy_sprime,
    cyclic_symmetrize,
    cyclic_violation,
    default_cprime,
    default_eps,
    harmonic_part,
    homotopy_s,
    is_cyclic,
    is_mc,
    map_to_tensor,
    mc_residual,
    model_algebra,
    normal_form_cyclic,
    normal_form_plain,
    structure_from_json,
    structure_to_json,
)
from curvedgraphs.tensors import AINF, LINF, pi_parities, symmetrize

ONE = Fraction(1)

MIXED = GradedSpace.of(1, 2)
MIXED_IP = InnerProduct.from_rows(MIXED, [[1, 0, 0], [0, 0, 1], [0, -1, 0]])
EVEN2 = GradedSpace.of(2, 0)
EVEN2_IP = InnerProduct.from_rows(EVEN2, [[0, 1], [1, 0]])


def rng_family(space, flavor, parity, arities, rng, density=6):
    pp = pi_parities(space.parities)
    comps = {}
    for a in arities:
        ent = {}
        for _ in range(density):
            word = tuple(rng.randrange(space.dim) for _ in range(a))
            out = rng.randrange(space.dim)
            if (pp[out] + sum(pp[b] for b in word)) % 2 != parity:
                continue
            ent[(word, out)] = Fraction(rng.randint(-3, 3))
        ent = {k: v for k, v in ent.items() if v}
        if flavor == LINF:
            ent = symmetrize(ent, a, pp)
        if ent:
            comps[a] = ent
    return CochainFamily(space, flavor, parity, comps)


def family_as_flat(fam):
    return {(a, k): v for a, e in fam.components.items() for k, v in e.items()}


def rng_gauge(space, flavor, cap, rng, ip=None, entries=4):
    pp = pi_parities(space.parities)
    ops = {}
    for _ in range(entries):
        a = rng.randint(2, cap)
        word = tuple(rng.randrange(space.dim) for _ in range(a))
        out = rng.randrange(space.dim)
        if (pp[out] + sum(pp[b] for b in word)) % 2 != 0:
            continue
        bucket = ops.setdefault(a, {})
        bucket[(word, out)] = bucket.get((word, out), Fraction(0)) + Fraction(
            rng.randint(-2, 2)
        )
    clean = {}
    for a, e in ops.items():
        e = {k: v for k, v in e.items() if v}
        if flavor == LINF:
            e = symmetrize(e, a, pp)
        elif ip is not None:
            e = cyclic_symmetrize(e, a, ip)
        if e:
            clean[a] = e
    return GaugeElement(space, flavor, cap + 1, clean)


# ---------------------------------------------------------------------------
# Maurer-Cartan residual


def test_mc_residual_zero_structure():
    m = InfinityStructure(MIXED, AINF, 4, {})
    assert mc_residual(m).is_zero()


def test_mc_residual_curvature_only():
    m = InfinityStructure(GradedSpace.of(1, 0), AINF, 4, {0: {((), 0): ONE}})
    assert mc_residual(m).is_zero()


def test_mc_residual_v1_model_brute_force():
    """The one-dimensional model with m_0 and m_2: check the residual against
    an independent brute-force composer that enumerates all insertions."""
    m, _ = model_algebra("V", t=(ONE,), cap=5)
    res = mc_residual(m)
    assert res.is_zero()

    # brute force: all (outer arity, inner arity, position) insertions
    pp = pi_parities(m.space.parities)
    brute = {}
    for fa, fe in m.ops.items():
        for ga, ge in m.ops.items():
            n = fa + ga - 1
            if n < 0 or n > m.cap - 1:
                continue
            for (wf, of), cf in fe.items():
                for (wg, og), cg in ge.items():
                    for pos in range(fa):
                        if wf[pos] != og:
                            continue
                        sign = (-1) ** sum(pp[b] for b in wf[:pos])
                        word = wf[:pos] + wg + wf[pos + 1:]
                        key = (n, word, of)
                        brute[key] = brute.get(key, Fraction(0)) + sign * cf * cg
    assert all(v == 0 for v in brute.values())


def test_mc_residual_detects_violation():
    # m_0 = c plus an m_1 that does not square to zero against the curvature
    space = GradedSpace.of(1, 1)
    m = InfinityStructure(
        space, AINF, 3, {0: {((), 0): ONE}, 1: {((0,), 1): ONE, ((1,), 0): ONE}}
    )
    assert not mc_residual(m).is_zero()


# ---------------------------------------------------------------------------
# cyclicity


def test_zero_structure_is_cyclic():
    m = InfinityStructure(MIXED, AINF, 3, {})
    assert is_cyclic(m, MIXED_IP)


def test_v0_model_is_cyclic_and_mc():
    m, ip = model_algebra("V", t=(), cap=3)
    assert is_mc(m)
    assert is_cyclic(m, ip)


def test_v1_and_vprime_models_cyclic_mc():
    for kind, t in (("V", (ONE,)), ("Vprime", (ONE,))):
        m, ip = model_algebra(kind, t=t, cap=6)
        assert is_mc(m)
        assert is_cyclic(m, ip)


def test_perturbed_structure_reports_violating_word():
    m, ip = model_algebra("Vprime", t=(ONE,), cap=4)
    ops = {a: dict(e) for a, e in m.ops.items()}
    # break cyclic symmetry at arity 2
    ops.setdefault(2, {})[((1, 0), 0)] = Fraction(7)
    broken = InfinityStructure(m.space, AINF, 4, ops)
    viol = cyclic_violation(broken, ip)
    assert viol is not None
    arity, word = viol
    assert arity == 2 and len(word) == 3


def test_cyclic_symmetrize_is_projector():
    rng = random.Random(0)
    fam = rng_family(MIXED, AINF, 1, [2, 3], rng)
    for a, e in fam.components.items():
        once = cyclic_symmetrize(e, a, MIXED_IP)
        twice = cyclic_symmetrize(once, a, MIXED_IP)
        assert once == twice


# ---------------------------------------------------------------------------
# gauge action


def test_apply_gauge_identity():
    m, _ = model_algebra("V", t=(ONE,), cap=4)
    g = GaugeElement(m.space, AINF, 5, {})
    assert apply_gauge(m, g) == m


def test_apply_gauge_on_zero_structure():
    rng = random.Random(1)
    m = InfinityStructure(MIXED, AINF, 4, {})
    g = rng_gauge(MIXED, AINF, 4, rng)
    assert apply_gauge(m, g).ops == {}


@pytest.mark.parametrize("flavor", [AINF, LINF])
def test_gauge_invertibility_round_trip(flavor):
    rng = random.Random(2)
    for _ in range(6):
        base = InfinityStructure(MIXED, flavor, 5, {0: {((), 0): ONE}})
        g = rng_gauge(MIXED, flavor, 5, rng)
        m = apply_gauge(base, g)
        assert apply_gauge(m, g.negated()) == base


@pytest.mark.parametrize("flavor", [AINF, LINF])
def test_gauge_preserves_mc(flavor):
    rng = random.Random(3)
    for _ in range(6):
        m, ip = model_algebra("V", t=(ONE, Fraction(-2)), cap=6, flavor=flavor)
        g = rng_gauge(m.space, flavor, m.cap, rng)
        assert is_mc(apply_gauge(m, g))


def test_gauge_linear_layer_conjugates():
    m, ip = model_algebra("Vprime", t=(ONE,), cap=4)
    lin = ((Fraction(2), Fraction(0)), (Fraction(0), Fraction(1, 2)))
    g = GaugeElement(m.space, AINF, 5, {}, linear=lin)
    mm = apply_gauge(m, g)
    # curvature c = e0 maps to L(c) = 2 e0; m_2(c, c) = c' rescales accordingly
    assert mm.curvature == {0: Fraction(2)}
    assert is_mc(mm)


# ---------------------------------------------------------------------------
# deformation complex: differential and homotopies


def test_curved_differential_arity0_vanishes():
    f = CochainFamily(MIXED, AINF, 1, {0: {((), 0): ONE}})
    assert curved_differential(f, {0: ONE}).is_zero()


def test_curved_differential_identity_map():
    # f = identity at arity 1 maps to the constant at the curvature
    space = GradedSpace.of(1, 1)
    f = CochainFamily(space, AINF, 0, {1: {((0,), 0): ONE, ((1,), 1): ONE}})
    d = curved_differential(f, {0: ONE})
    assert d.components == {0: {((), 0): ONE}}


def test_curved_differential_rejects_bad_curvature():
    f = CochainFamily(MIXED, AINF, 0, {1: {((0,), 0): ONE}})
    with pytest.raises(StructureError):
        curved_differential(f, {})
    with pytest.raises(StructureError):
        curved_differential(f, {1: ONE})  # odd element


@pytest.mark.parametrize("flavor", [AINF, LINF])
def test_differential_squares_to_zero(flavor):
    rng = random.Random(4)
    c = {0: ONE}
    for parity in (0, 1):
        for _ in range(5):
            f = rng_family(MIXED, flavor, parity, [1, 2, 3, 4], rng)
            dd = curved_differential(curved_differential(f, c), c)
            assert dd.is_zero()


@pytest.mark.parametrize("flavor", [AINF, LINF])
def test_homotopy_identity_ds_plus_sd(flavor):
    """d s + s d is the identity on families of every arity and parity."""
    rng = random.Random(5)
    c = {0: ONE}
    eps = default_eps(MIXED, c)
    for parity in (0, 1):
        for _ in range(8):
            f = rng_family(MIXED, flavor, parity, [0, 1, 2, 3, 4], rng)
            lhs = {}
            for g in (
                homotopy_s(curved_differential(f, c), eps, c),
                curved_differential(homotopy_s(f, eps, c), c),
            ):
                for key, v in family_as_flat(g).items():
                    lhs[key] = lhs.get(key, Fraction(0)) + v
            lhs = {k: v for k, v in lhs.items() if v}
            assert lhs == family_as_flat(f)


def test_homotopy_s_spec_example_arity0():
    # s of the constant-at-c family evaluates eps on the new slot
    f = CochainFamily(MIXED, AINF, 1, {0: {((), 0): ONE}})
    eps = default_eps(MIXED, {0: ONE})
    s = homotopy_s(f, eps, {0: ONE})
    assert s.components == {1: {((0,), 0): ONE}}


def test_homotopy_s_requires_eps_normalization():
    f = CochainFamily(MIXED, AINF, 1, {0: {((), 0): ONE}})
    with pytest.raises(StructureError):
        homotopy_s(f, {0: Fraction(2)}, {0: ONE})


def _operator_sd_plus_ds(piece, arity, ip, c, cprime, flavor):
    pf = CochainFamily(ip.space, flavor, 1, {arity: piece})
    lhs = {}
    d1 = curved_differential(pf, c)
    if not d1.is_zero():
        for key, v in family_as_flat(cyclic_homotopy_sprime(d1, ip, c, cprime)).items():
            lhs[key] = lhs.get(key, Fraction(0)) + v
    s1 = cyclic_homotopy_sprime(pf, ip, c, cprime)
    if not s1.is_zero():
        for key, v in family_as_flat(curved_differential(s1, c)).items():
            lhs[key] = lhs.get(key, Fraction(0)) + v
    return {k: v for k, v in lhs.items() if v}


def test_cyclic_homotopy_eigenvalues_on_content_pieces():
    """s'd + ds' multiplies the content-k piece by k (associative flavor).

    Content pieces are produced by brute-force slotwise decomposition of the
    structure tensor in the basis {eps} + {functionals killing c}.
    """
    rng = random.Random(6)
    c = {0: ONE}
    for space, ip, cprime in (
        (EVEN2, EVEN2_IP, {1: ONE}),
        (MIXED, MIXED_IP, {0: ONE}),
    ):
        for _ in range(6):
            fam = rng_family(space, AINF, 1, [1, 2, 3, 4], rng)
            for a, e in fam.components.items():
                cyc = cyclic_symmetrize(e, a, ip)
                if not cyc:
                    continue
                pieces = content_decomposition(cyc, a, ip, c, cprime)
                # decomposition sums back to the input
                total = {}
                for piece in pieces.values():
                    for k, v in piece.items():
                        total[k] = total.get(k, Fraction(0)) + v
                assert {k: v for k, v in total.items() if v} == cyc
                for k, piece in pieces.items():
                    lhs = _operator_sd_plus_ds(piece, a, ip, c, cprime, AINF)
                    want = {
                        (a, key): Fraction(k) * v
                        for key, v in piece.items()
                        if k and v
                    }
                    assert lhs == want


def test_cyclic_homotopy_contracts_symmetric_flavor():
    """For the symmetric flavor s'd + ds' is the identity in every arity."""
    rng = random.Random(7)
    c = {0: ONE}
    for _ in range(6):
        fam = rng_family(MIXED, LINF, 1, [1, 2, 3], rng)
        for a, e in fam.components.items():
            lhs = _operator_sd_plus_ds(e, a, MIXED_IP, c, {0: ONE}, LINF)
            assert lhs == {(a, k): v for k, v in e.items()}


def test_harmonic_generator_behaviour():
    """The pure-eps cocycle is annihilated by s'd + ds', and dies at odd arity."""
    c = {0: ONE}
    cprime = {1: ONE}
    for arity in (2, 4):
        _, gen = harmonic_part(
            {(((0,) * arity), 1): ONE}, arity, EVEN2_IP, c, cprime
        )
        assert gen  # even arity: generator present
        lhs = _operator_sd_plus_ds(gen, arity, EVEN2_IP, c, cprime, AINF)
        assert lhs == {}
    # odd arity: cyclic invariance forces the all-c evaluation to vanish
    rng = random.Random(8)
    for arity in (1, 3):
        fam = rng_family(EVEN2, AINF, 1, [arity], rng)
        e = fam.components.get(arity)
        if not e:
            continue
        cyc = cyclic_symmetrize(e, arity, EVEN2_IP)
        coeff, gen = harmonic_part(cyc, arity, EVEN2_IP, c, cprime)
        assert coeff == 0 and not gen


# ---------------------------------------------------------------------------
# normal forms


@pytest.mark.parametrize("flavor", [AINF, LINF])
def test_normal_form_plain_round_trip(flavor):
    rng = random.Random(9)
    for _ in range(10):
        base = InfinityStructure(MIXED, flavor, 5, {0: {((), 0): ONE}})
        g = rng_gauge(MIXED, flavor, 5, rng)
        m = apply_gauge(base, g)
        nf, xi = normal_form_plain(m)
        assert nf == base
        assert apply_gauge(m, xi) == nf


def test_normal_form_plain_already_normal():
    m, _ = model_algebra("V", t=(), cap=4)
    nf, xi = normal_form_plain(m)
    assert nf == m
    assert not xi.ops


def test_normal_form_plain_requires_curvature():
    m = InfinityStructure(MIXED, AINF, 3, {})
    with pytest.raises(StructureError):
        normal_form_plain(m)


def test_normal_form_plain_kills_top_arity():
    """Clearing the cap arity requires a gauge component one above the cap."""
    space = EVEN2
    m = InfinityStructure(
        space, AINF, 2, {0: {((), 0): ONE}, 2: {((0, 0), 0): ONE}}
    )
    assert is_mc(m)
    nf, xi = normal_form_plain(m)
    assert nf.ops == {0: {((), 0): ONE}}
    assert 3 in xi.ops


@pytest.mark.parametrize(
    "kind,t",
    [
        ("V", ()),
        ("V", (ONE,)),
        ("V", (Fraction(5), Fraction(-2))),
        ("Vprime", (ONE,)),
        ("Vprime", (Fraction(3), Fraction(7))),
    ],
)
def test_normal_form_cyclic_fixes_models(kind, t):
    """The model algebras are already in canonical form: trivial gauge,
    invariants exactly the defining sequence (padded through the cap)."""
    m, ip = model_algebra(kind, t=t, cap=6)
    nf, xi, inv = normal_form_cyclic(m, ip)
    assert nf == m
    assert not xi.ops
    assert inv == tuple(t) + (Fraction(0),) * (len(inv) - len(t))


@pytest.mark.parametrize("flavor", [AINF, LINF])
def test_normal_form_cyclic_round_trip_random_gauges(flavor):
    rng = random.Random(10)
    for _ in range(8):
        t = tuple(Fraction(rng.randint(-3, 3)) for _ in range(rng.randint(0, 2)))
        kind = rng.choice(["V", "Vprime"])
        m0, ip = model_algebra(kind, t=t, cap=6, flavor=flavor)
        g = rng_gauge(m0.space, flavor, m0.cap, rng, ip=ip)
        m = apply_gauge(m0, g)
        assert is_cyclic(m, ip)
        nf, xi, inv = normal_form_cyclic(m, ip)
        assert nf == m0
        assert apply_gauge(m, xi) == nf
        # invariants agree with direct evaluation on the pre-gauge structure
        c = m0.curvature
        cp = default_cprime(ip, c)
        for i, coeff in enumerate(inv, start=1):
            direct, _ = harmonic_part(m0.component(2 * i), 2 * i, ip, c, cp)
            assert coeff == direct


def test_normal_form_cyclic_requires_cyclicity():
    space = EVEN2
    m = InfinityStructure(
        space, AINF, 4, {0: {((), 0): ONE}, 2: {((0, 1), 0): ONE}}
    )
    if not is_cyclic(m, EVEN2_IP):
        with pytest.raises(StructureError):
            normal_form_cyclic(m, EVEN2_IP)


def test_normal_form_cyclic_lie_flavor_kills_everything():
    rng = random.Random(11)
    m0, ip = model_algebra("V", t=(ONE, ONE), cap=6, flavor=LINF)
    assert m0.ops == {0: {((), 0): ONE}}  # higher entries symmetrize away
    g = rng_gauge(m0.space, LINF, m0.cap, rng, ip=ip)
    m = apply_gauge(m0, g)
    nf, xi, inv = normal_form_cyclic(m, ip)
    assert nf.ops == {0: {((), 0): ONE}}
    assert all(v == 0 for v in inv)


# ---------------------------------------------------------------------------
# distinguished functionals and serialization


def test_default_eps_and_cprime_choices():
    c = {0: Fraction(2)}
    eps = default_eps(MIXED, c)
    assert eps == {0: Fraction(1, 2)}
    cp = default_cprime(MIXED_IP, c)
    assert cp == {0: Fraction(1, 2)}
    m, ip = model_algebra("Vprime", t=(ONE,), cap=4)
    assert default_cprime(ip, m.curvature) == {1: ONE}


def test_json_round_trip_bit_exact():
    m, ip = model_algebra("Vprime", t=(Fraction(-7, 3),), cap=4)
    text = structure_to_json(m, ip)
    m2, ip2 = structure_from_json(text)
    assert m2 == m
    assert ip2 is not None and ip2.gram == ip.gram
    assert structure_to_json(m2, ip2) == text


def test_json_rejects_missing_fields():
    with pytest.raises(StructureError):
        structure_from_json("{}")


def test_json_coefficients_are_reduced_strings():
    m, ip = model_algebra("V", t=(Fraction(2, 4),), cap=3)
    text = structure_to_json(m, ip)
    assert '"1/2"' in text
