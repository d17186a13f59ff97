import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from choreosym.groups import (
    ClosureError,
    CyclicSubgroup,
    GroupElement,
    GroupNameError,
    InfiniteGroupError,
    SpecError,
    SymmetryGroup,
    SymmetryGroupSpec,
    build_group,
    catalog_specs,
    choreography_element,
    coercivity_check,
    identity_element,
    kernels_and_core,
    parse_group_name,
    perm_cycles,
    rcc_check,
    s_1,
    sigma_1,
    sigma_k,
    subconjugate,
)


def refl_element(n):
    return GroupElement(Fraction(0), True, s_1(n), Fraction(0), True)


# ---------------------------------------------------------------------------
# composition

class TestCompose:
    def test_choreography_element_has_order_n(self):
        for n in (3, 5, 8):
            c = choreography_element(n)
            assert (c ** n).is_identity()
            assert c.order() == n

    def test_reflection_is_an_involution(self):
        r = refl_element(4)
        assert (r * r).is_identity()

    def test_dihedral_relation(self):
        # brute-force multiplication of the three explicit elements
        for n in (3, 6):
            c = choreography_element(n)
            r = refl_element(n)
            assert r * c * r.inverse() == c.inverse()

    def test_mismatched_n_rejected(self):
        with pytest.raises(SpecError):
            choreography_element(3) * choreography_element(4)

    def test_exhaustive_group_axioms_small(self):
        for spec in (SymmetryGroupSpec("C", 3, 2, 1), SymmetryGroupSpec("Dprime1", 3)):
            els = build_group(spec).elements
            e = identity_element(3)
            for f in els:
                assert f * f.inverse() == e
                assert f.inverse() * f == e
                for g in els:
                    assert f * g in els
                    for h in els:
                        assert (f * g) * h == f * (g * h)

    @given(st.integers(0, 11), st.integers(0, 11), st.integers(0, 11))
    @settings(max_examples=60, deadline=None)
    def test_associativity_on_c34(self, i, j, k):
        els = build_group(SymmetryGroupSpec("C", 3, 4, 1)).elements
        f, g, h = els[i], els[j], els[k]
        assert (f * g) * h == f * (g * h)


# ---------------------------------------------------------------------------
# permutation constructors

class TestPermConstructors:
    def test_sigma_1_and_s_1(self):
        assert sigma_1(4) == (1, 2, 3, 0)
        assert s_1(5) == (0, 4, 3, 2, 1)  # fixes 1, reverses the rest

    def test_sigma_k_is_kth_root(self):
        for n, k in [(5, 2), (5, 3), (7, 2), (7, 4), (8, 3)]:
            p = sigma_k(n, k)
            q = tuple(range(n))
            for _ in range(k):
                q = tuple(p[q[i]] for i in range(n))
            assert q == sigma_1(n)

    def test_sigma_2_of_7_cycle(self):
        assert perm_cycles(sigma_k(7, 2)) == "(1 5 2 6 3 7 4)"

    def test_sigma_k_needs_coprime(self):
        with pytest.raises(SpecError):
            sigma_k(6, 2)


# ---------------------------------------------------------------------------
# building the catalog groups

class TestBuildGroup:
    def test_orders_of_named_examples(self):
        assert build_group(SymmetryGroupSpec("C", 3, 4, 1)).order == 12
        assert build_group(SymmetryGroupSpec("D", 6, 4, 1)).order == 48
        assert build_group(SymmetryGroupSpec("Cprime", 3)).order == 6

    def test_cprime_generator_relations(self):
        for n in (3, 5, 7):
            g = build_group(SymmetryGroupSpec("Cprime", n)).generators[0]
            assert g * g == choreography_element(n)
            gn = g ** n
            assert gn.refl and gn.rot == 0
            assert gn.perm == tuple(range(n))
            assert gn.shift == Fraction(1, 2) and not gn.rev

    def test_order_formulas_on_grid(self):
        for n in (3, 4, 5):
            for spec in catalog_specs(n, 5):
                assert build_group(spec).order == spec.expected_order()

    def test_closure_is_closed(self):
        g = build_group(SymmetryGroupSpec("D", 4, 3, 1))
        els = set(g.elements)
        for a in g.elements:
            for b in g.elements:
                assert a * b in els

    def test_invalid_specs_rejected(self):
        with pytest.raises(SpecError):
            SymmetryGroupSpec("Cprime", 4)  # even n
        with pytest.raises(SpecError):
            build_group(SymmetryGroupSpec("C", 3, 4, 2))  # gcd(k,l) != 1
        with pytest.raises(SpecError):
            SymmetryGroupSpec("C", 2, 1, 1)

    def test_dinf_is_spec_only(self):
        g = build_group(SymmetryGroupSpec("Dinf", 5, None, 2))
        assert not g.is_finite()
        assert g.continuous_generator is not None
        with pytest.raises(InfiniteGroupError):
            g.require_finite()
        with pytest.raises(InfiniteGroupError):
            kernels_and_core(g)


# ---------------------------------------------------------------------------
# kernels and the core

class TestKernels:
    def test_core_of_c64(self):
        group = build_group(SymmetryGroupSpec("C", 6, 4, 1))
        _, _, core = kernels_and_core(group)
        assert core.order == math.gcd(6, 4) == 2
        gen = core.generator
        assert gen.rot == Fraction(1, 2) and not gen.refl
        assert gen.perm == tuple((i + 3) % 6 for i in range(6))
        assert gen.shift == 0 and not gen.rev

    def test_ker_rho_of_cn1_is_whole_group(self):
        for n in (3, 6):
            group = build_group(SymmetryGroupSpec("C", n, 1, 1))
            ker_rho, _, _ = kernels_and_core(group)
            assert ker_rho.order == group.order == n

    def test_coprime_generator_structure_c34(self):
        # with a*n - b*k = 1 (a = b = -1), g0^a c^b has time shift 1/(nk)
        group = build_group(SymmetryGroupSpec("C", 3, 4, 1))
        c, g0 = group.generators
        el = g0.inverse() * c.inverse()
        assert el.shift == Fraction(1, 12)
        assert el.rot == Fraction(-1, 4) % 1
        assert el.perm == sigma_1(3 * 1)[::-1] or el.perm == tuple((i - 1) % 3 for i in range(3))
        assert el.order() == 12  # it generates the whole cyclic group

    def test_kernel_intersections_trivial(self):
        for n in (3, 4, 6):
            for spec in catalog_specs(n, 4):
                group = build_group(spec)
                ker_rho, ker_sigma, core = kernels_and_core(group)
                assert set(core.elements) & set(ker_rho.elements) == {identity_element(n)}
                assert set(core.elements) & set(ker_sigma.elements) == {identity_element(n)}

    def test_choreography_subgroup_normal_and_perms_dihedral(self):
        for spec in catalog_specs(5, 4):
            group = build_group(spec)
            n = group.n
            c_subgroup = {choreography_element(n) ** m for m in range(n)}
            sigma_plus = set()
            p = tuple(range(n))
            for _ in range(n):
                p = tuple(sigma_1(n)[p[i]] for i in range(n))
                sigma_plus.add(p)
                sigma_plus.add(tuple(s_1(n)[p[i]] for i in range(n)))
            for g in group.elements:
                for d in c_subgroup:
                    assert g * d * g.inverse() in c_subgroup
                assert g.perm in sigma_plus

    def test_exceptional_cores_trivial(self):
        for family in ("Cprime", "Dprime1", "Dprime2"):
            group = build_group(SymmetryGroupSpec(family, 5))
            _, _, core = kernels_and_core(group)
            assert core.order == 1


# ---------------------------------------------------------------------------
# subconjugacy

class TestSubconjugate:
    def spec(self, name):
        return parse_group_name(name)

    def test_verbatim_lattice_cases(self):
        h1 = self.spec("C(4,5)")
        h2 = self.spec("C(4,5/2)")
        truth1 = {1: True, 2: False, 3: False, 4: True, 5: False}
        truth2 = {1: False, 2: False, 3: True, 4: False, 5: False}
        for lp in range(1, 6):
            target = SymmetryGroupSpec("C", 4, 10, lp)
            assert subconjugate(h1, target) is truth1[lp]
            assert subconjugate(h2, target) is truth2[lp]

    def test_exceptional_edges(self):
        n = 5
        assert subconjugate(self.spec(f"C({n},1)"), self.spec(f"C'({n},2)"))
        assert subconjugate(self.spec(f"C({n},1)"), self.spec(f"D'({n},1)"))
        assert subconjugate(self.spec(f"C'({n},2)"), self.spec(f"D'({n},2)"))
        assert subconjugate(self.spec(f"D'({n},1)"), self.spec(f"D'({n},2)"))
        assert not subconjugate(self.spec(f"C({n},2)"), self.spec(f"C'({n},2)"))
        assert not subconjugate(self.spec(f"D'({n},1)"), self.spec(f"C'({n},2)"))
        assert not subconjugate(self.spec(f"D({n},1)"), self.spec(f"D'({n},2)"))

    def test_c_prec_d_same_parameters(self):
        assert subconjugate(self.spec("C(6,4)"), self.spec("D(6,4)"))
        assert not subconjugate(self.spec("D(6,4)"), self.spec("C(6,4)"))

    def test_k_infinity_rules(self):
        assert subconjugate(self.spec("C(4,5)"), self.spec("D(4,inf/1)"))
        assert subconjugate(self.spec("C(4,5)"), self.spec("D(4,inf/4)"))
        assert not subconjugate(self.spec("C(4,5/2)"), self.spec("D(4,inf/1)"))
        assert subconjugate(self.spec("C(4,5/2)"), self.spec("D(4,inf/3)"))
        assert not subconjugate(self.spec("D(4,inf/1)"), self.spec("D(4,5)"))

    def test_mismatched_n_rejected(self):
        with pytest.raises(SpecError):
            subconjugate(self.spec("C(4,1)"), self.spec("C(5,1)"))

    def test_partial_order_on_grid(self):
        for n in (4, 5):
            specs = catalog_specs(n, 8, include_dinf=True)
            rel = {
                (a.name(), b.name()): subconjugate(a, b) for a in specs for b in specs
            }
            for a in specs:
                assert rel[(a.name(), a.name())]
            for a in specs:
                for b in specs:
                    if a.name() != b.name() and rel[(a.name(), b.name())]:
                        assert not rel[(b.name(), a.name())], (a.name(), b.name())
            for a in specs:
                for b in specs:
                    if not rel[(a.name(), b.name())]:
                        continue
                    for c in specs:
                        if rel[(b.name(), c.name())]:
                            assert rel[(a.name(), c.name())], (a.name(), b.name(), c.name())

    def test_canonicalization(self):
        assert SymmetryGroupSpec("C", 3, 4, 3).canonical().l == 1
        assert SymmetryGroupSpec("C", 3, 7, 5).canonical().l == 2
        assert SymmetryGroupSpec("C", 4, 10, 7).canonical().l == 3
        assert SymmetryGroupSpec("D", 5, 9, 8).canonical().l == 1


# ---------------------------------------------------------------------------
# rotating circle condition

class TestRcc:
    def test_c_family_holds(self):
        assert rcc_check(build_group(SymmetryGroupSpec("C", 5, 3, 1))).holds

    def test_d64_fails_with_reflection_witness(self):
        report = rcc_check(build_group(SymmetryGroupSpec("D", 6, 4, 1)))
        assert not report.holds
        w = report.witness
        assert w == GroupElement(Fraction(0), True, s_1(6), Fraction(0), True)

    def test_dprime1_holds(self):
        report = rcc_check(build_group(SymmetryGroupSpec("Dprime1", 3)))
        assert report.holds and report.witness is None

    def test_verdict_table(self):
        verdict = {"C": True, "D": False, "Cprime": True, "Dprime1": True, "Dprime2": False}
        for n in (3, 4, 5, 6):
            for spec in catalog_specs(n, 5):
                report = rcc_check(build_group(spec))
                assert report.holds == verdict[spec.family], spec.name()
                if not report.holds:
                    assert report.witness in build_group(spec).elements


# ---------------------------------------------------------------------------
# coercivity

class TestCoercivity:
    def test_choreography_group_coercive(self):
        assert coercivity_check(build_group(SymmetryGroupSpec("C", 3, 1, 1)))

    def test_trivial_group_not_coercive(self):
        spec = SymmetryGroupSpec("C", 4, 1, 1)
        trivial = SymmetryGroup(spec, (), (identity_element(4),), 1)
        assert not coercivity_check(trivial)

    def test_all_catalog_groups_coercive(self):
        for n in (3, 4, 5):
            for spec in catalog_specs(n, 5):
                assert coercivity_check(build_group(spec)), spec.name()

    def test_float_path_matches_exact_path(self):
        from choreosym.groups import _coercivity_exact, _coercivity_float

        group = build_group(SymmetryGroupSpec("C", 4, 4, 1))  # angles in {0,1/4,...}
        assert _coercivity_exact(group.elements, 4) == _coercivity_float(group.elements, 4)


# ---------------------------------------------------------------------------
# names

class TestNames:
    def test_round_trip(self):
        for name in ["C(3,4)", "C(5,7/2)", "D(6,4)", "D(8,9/4)", "C'(3,2)",
                     "D'(5,1)", "D'(7,2)", "D(4,inf/3)"]:
            assert parse_group_name(name).name() == name

    def test_parse_errors_carry_position(self):
        with pytest.raises(GroupNameError) as err:
            parse_group_name("C(3;4)")
        assert err.value.pos == 3
        with pytest.raises(GroupNameError):
            parse_group_name("E(3,4)")
        with pytest.raises(GroupNameError):
            parse_group_name("C'(3,3)")
        with pytest.raises(GroupNameError):
            parse_group_name("C(3,4)x")

    def test_parse_accepts_whitespace_free_only(self):
        # surrounding whitespace is stripped, internal whitespace is not
        assert parse_group_name(" C(3,4) ").name() == "C(3,4)"
        with pytest.raises(GroupNameError):
            parse_group_name("C(3, 4)")
