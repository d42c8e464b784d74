"""Operations of the calculus module across the preset examples."""

import random

import pytest

from nccalc.algebra import Presentation, identity_morphism
from nccalc.calculus import (CalculusError, CalculusSpec, DirectionSet, GradedForm,
                             TwoFormStructure,
                             central_one_forms_probe, check_differentiability,
                             constants, delta, differential, d_form,
                             graded_commutator, is_central_one_form, move_left,
                             move_right, parse_form, solve_theta_in_differentials,
                             theta_solution_form, two_form_structure, vartheta,
                             verify_inner_identities, verify_twisted_two_forms)
from nccalc.presets import load_preset
from nccalc.scalar import Scalar, params


def spec_of(pid):
    return load_preset(pid).spec


def theta(spec, *labels):
    return GradedForm.theta(spec, *labels)


# -- e_s


def test_e_s_shift_square():
    spec = spec_of("poly_shift_S12")
    x = spec.pres.gen("x")
    assert spec.e("1", x * x) == 2 * x + spec.pres.one


def test_e_s_heisenberg_unit():
    spec = spec_of("heisenberg")
    assert spec.e("1", spec.pres.gen("x")).is_one()


def test_e_s_twisted_heisenberg():
    spec = spec_of("twisted_heisenberg_2")
    assert spec.e("1", spec.pres.gen("x")).is_one()


def test_e_s_twisted_leibniz_random():
    rng = random.Random(1)
    for pid in ["quantum_plane_a", "h_plane", "twisted_heisenberg_3", "z3_root_of_unity"]:
        spec = spec_of(pid)
        from nccalc.suites import random_poly
        for _ in range(20):
            f, g = random_poly(spec.pres, rng), random_poly(spec.pres, rng)
            for s in spec.directions.labels:
                assert spec.e(s, f * g) == \
                    spec.e(s, f) * spec.phi(s).apply(g) + f * spec.e(s, g)


# -- differential


def test_differential_h_plane_closed_form():
    spec = spec_of("h_plane")
    p, t1, r, t2 = params("p t1 r t2")
    x, y = spec.pres.gen("x"), spec.pres.gen("y")
    want = (p / t1) * (theta(spec, "1") * y) + ((1 - r) / t2) * (theta(spec, "2") * x)
    assert differential(spec, x) == want


def test_differential_of_unit_is_zero():
    for pid in ["quantum_plane_a", "twisted_heisenberg_2", "glpq2"]:
        spec = spec_of(pid)
        assert differential(spec, spec.pres.one).is_zero()


def test_differential_z3_cubes_vanish():
    spec = spec_of("z3_root_of_unity")
    x, y = spec.pres.gen("x"), spec.pres.gen("y")
    for f in [x ** 3, y ** 3, x * y, y * x]:
        assert differential(spec, f).is_zero()


# -- move_left / move_right


def test_move_left_h_plane():
    spec = spec_of("h_plane")
    p, = [params("p")]
    x, y = spec.pres.gen("x"), spec.pres.gen("y")
    # f theta^1 = theta^1 f(x - p y, y): moving left applies phi_1
    assert move_left(spec, x, ("1",)) == (x + p * y) * theta(spec, "1")
    assert move_right(spec, ("1",), x) == x - p * y


def test_move_left_unit_unchanged():
    spec = spec_of("quantum_plane_a")
    assert move_left(spec, spec.pres.one, ("1", "2")) == theta(spec, "1", "2")


def test_move_round_trip_random():
    rng = random.Random(4)
    from nccalc.suites import random_poly
    for pid in ["quantum_plane_a", "z3_root_of_unity", "glpq2"]:
        spec = spec_of(pid)
        labels = spec.directions.labels
        for _ in range(25):
            f = random_poly(spec.pres, rng)
            w = tuple(rng.choice(labels) for _ in range(rng.randint(1, 3)))
            assert spec.phi_word_inv(w, spec.phi_word(w, f)) == f


# -- vartheta


def test_vartheta_poly_shift_sym():
    spec = spec_of("poly_shift_sym")
    x = spec.pres.gen("x")
    assert vartheta(spec) == differential(spec, x * x) - (2 * x) * differential(spec, x)
    assert vartheta(spec) == theta(spec, "-1") + theta(spec, "1")


def test_vartheta_glpq2():
    spec = spec_of("glpq2")
    a, d = spec.pres.gen("a"), spec.pres.gen("d")
    want = theta(spec, "1") + a * theta(spec, "2") + d * theta(spec, "3") + theta(spec, "4")
    assert vartheta(spec) == want


def test_vartheta_twisted_heisenberg():
    spec = spec_of("twisted_heisenberg_2")
    x, y = spec.pres.gen("x"), spec.pres.gen("y")
    assert vartheta(spec) == x * differential(spec, y) - y * differential(spec, x)


def test_vartheta_inner_on_generators():
    for pid in ["quantum_plane_a", "h_plane", "heisenberg", "z3_root_of_unity",
                "twisted_heisenberg_3", "glpq2"]:
        spec = spec_of(pid)
        th = vartheta(spec)
        for g in spec.pres.generators:
            f = spec.pres.gen(g.name)
            assert th * f - f * th == differential(spec, f)


# -- two_form_structure


def test_two_forms_quantum_plane():
    spec = spec_of("quantum_plane_a")
    ts = spec.two_forms
    assert theta(spec, "1").wedge(theta(spec, "1")).is_zero()
    assert theta(spec, "2").wedge(theta(spec, "2")).is_zero()
    assert (theta(spec, "1").wedge(theta(spec, "2"))
            + theta(spec, "2").wedge(theta(spec, "1"))).is_zero()
    assert ts.zeta_form().is_zero()
    assert all(not tab for tab in ts.delta_table.values())


def test_two_forms_shift_S12():
    spec = spec_of("poly_shift_S12")
    assert delta(spec, theta(spec, "1")).is_zero()
    assert delta(spec, theta(spec, "2")) == theta(spec, "1", "1")
    assert theta(spec, "2").wedge(theta(spec, "1")) == -theta(spec, "1", "2")
    assert theta(spec, "2").wedge(theta(spec, "2")).is_zero()
    assert spec.two_forms.zeta_form().is_zero()


def test_two_forms_shift_sym_biangle():
    spec = spec_of("poly_shift_sym")
    assert spec.two_forms.zeta_form() == \
        theta(spec, "-1", "1") + theta(spec, "1", "-1")
    assert delta(spec, theta(spec, "1")).is_zero()
    assert theta(spec, "1").wedge(theta(spec, "1")).is_zero()


def test_two_form_structure_requires_group():
    spec = spec_of("twisted_heisenberg_2")
    with pytest.raises(CalculusError):
        two_form_structure(spec)


# -- verify_twisted_two_forms


def test_twisted_two_forms_heisenberg2():
    spec = spec_of("twisted_heisenberg_2")
    rep = verify_twisted_two_forms(spec, spec.two_forms)
    assert rep.ok
    assert spec.two_forms.zeta_form() == theta(spec, "1", "2")


def test_twisted_two_forms_heisenberg3():
    spec = spec_of("twisted_heisenberg_3")
    rep = verify_twisted_two_forms(spec, spec.two_forms)
    assert rep.ok
    assert delta(spec, theta(spec, "3")) == \
        -theta(spec, "1", "2") - theta(spec, "2", "1")
    assert spec.two_forms.zeta_form() == -theta(spec, "2", "1")


def test_twisted_two_forms_wrong_sign_reported():
    pres = Presentation(["x", "y"], rules=[("y*x", "x*y - 1")])
    ident = identity_morphism(pres)
    spec = CalculusSpec(pres, DirectionSet(["1", "2", "3"]),
                        {"1": ident, "2": ident, "3": ident},
                        lambdas={"1": "-y", "2": "x", "3": "y*x"})
    one = Scalar.one()
    wrong = TwoFormStructure(
        spec, basis=[("1", "2"), ("2", "1"), ("1", "3"), ("2", "3")],
        reduction={("1", "1"): [], ("2", "2"): [], ("3", "3"): [],
                   ("3", "1"): [(-one, ("1", "3"))],
                   ("3", "2"): [(-one, ("2", "3"))]},
        delta_table={"1": {("1", "3"): pres.one},  # sign flipped
                     "2": {("2", "3"): pres.one},
                     "3": {("1", "2"): -pres.one, ("2", "1"): -pres.one}},
        zeta={("2", "1"): -pres.one},
    )
    rep = verify_twisted_two_forms(spec, wrong)
    assert not rep.ok
    assert any(c.path == "generator.x" and not c.ok for c in rep.checks)


# -- wedge


def test_wedge_vartheta_squared_quantum_plane():
    spec = spec_of("quantum_plane_a")
    th = vartheta(spec)
    assert th.wedge(th).is_zero()


def test_wedge_unit():
    spec = spec_of("heisenberg")
    assert theta(spec, "1").wedge(GradedForm.from_poly(spec, spec.pres.one)) == \
        theta(spec, "1")


def test_wedge_reduction_shift():
    spec = spec_of("poly_shift_S12")
    assert theta(spec, "2").wedge(theta(spec, "1")) == -theta(spec, "1", "2")


def test_wedge_degree3_order_independent():
    # reduce adjacent pairs in both association orders on random 3-words
    rng = random.Random(8)
    for pid in ["poly_shift_S12", "quantum_plane_a", "poly_shift_sym"]:
        spec = spec_of(pid)
        labels = spec.directions.labels
        for _ in range(30):
            a, b, c = (theta(spec, rng.choice(labels)) for _ in range(3))
            assert a.wedge(b).wedge(c) == a.wedge(b.wedge(c))


# -- delta and d


def test_delta_vanishes_on_algebra():
    for pid in ["quantum_plane_a", "poly_shift_S12", "twisted_heisenberg_3"]:
        spec = spec_of(pid)
        f = spec.pres.gen(spec.pres.generators[0].name)
        assert delta(spec, GradedForm.from_poly(spec, f)).is_zero()


def test_delta_bimodule_property():
    rng = random.Random(13)
    from nccalc.suites import random_poly
    spec = spec_of("heisenberg")
    for _ in range(20):
        f, g = random_poly(spec.pres, rng), random_poly(spec.pres, rng)
        s = rng.choice(spec.directions.labels)
        om = theta(spec, s)
        lhs = delta(spec, f * om * g)
        rhs = f * delta(spec, om) * g
        assert lhs == rhs


def test_delta_graded_leibniz_pair():
    spec = spec_of("poly_shift_S12")
    t1, t2 = theta(spec, "1"), theta(spec, "2")
    lhs = delta(spec, t1.wedge(t2))
    rhs = delta(spec, t1).wedge(t2) - t1.wedge(delta(spec, t2))
    assert lhs == rhs


def test_d_vartheta_minus_square_is_zeta():
    for pid in ["poly_shift_sym", "twisted_heisenberg_2", "twisted_heisenberg_3",
                "z3_root_of_unity"]:
        spec = spec_of(pid)
        th = vartheta(spec)
        assert d_form(spec, th) - th.wedge(th) == spec.two_forms.zeta_form()


def test_d_inner_on_forms_quantum_plane():
    # Delta = 0, so d omega = [vartheta, omega] for any omega
    spec = spec_of("quantum_plane_a")
    rng = random.Random(17)
    from nccalc.suites import random_poly
    th = vartheta(spec)
    for _ in range(10):
        om = random_poly(spec.pres, rng) * theta(spec, rng.choice(("1", "2")))
        assert d_form(spec, om) == graded_commutator(spec, th, om)


def test_d_squared_zero_on_dx():
    spec = spec_of("poly_shift_S12")
    dx = differential(spec, spec.pres.gen("x"))
    assert d_form(spec, dx).is_zero()


# -- inner identities


def test_inner_identities_pass_on_presets():
    for pid in ["quantum_plane_a", "poly_shift_sym", "heisenberg",
                "twisted_heisenberg_3", "h_plane_r1", "z3_root_of_unity"]:
        spec = spec_of(pid)
        rep = verify_inner_identities(spec)
        assert rep.ok, f"{pid}:\n{rep.text()}"


def test_delta_squared_is_zeta_commutator_random():
    rng = random.Random(19)
    from nccalc.suites import random_poly
    spec = spec_of("heisenberg")
    zeta = spec.two_forms.zeta_form()
    for _ in range(15):
        f = random_poly(spec.pres, rng)
        om = f * differential(spec, spec.pres.gen("x"))
        assert (delta(spec, delta(spec, om))
                + graded_commutator(spec, zeta, om)).is_zero()


# -- differentiability


def test_differentiability_quantum_plane_identity_images():
    spec = spec_of("quantum_plane_a")
    for s in spec.directions.labels:
        assert check_differentiability(spec, spec.phi(s)).ok


def test_differentiability_glpq2_scalings():
    spec = spec_of("glpq2")
    p, q = params("p q")
    rinv = (p * q).inverse()
    for s in spec.directions.labels:
        rep = check_differentiability(spec, spec.phi(s), {"2": rinv}, simple=True)
        assert rep.ok, rep.text()


def test_differentiability_wrong_image_reports_violation():
    spec = spec_of("quantum_plane_a")
    images = {"1": GradedForm.theta(spec, "2"), "2": GradedForm.theta(spec, "1")}
    rep = check_differentiability(spec, spec.phi("1"), images)
    assert not rep.ok
    assert any(c.path.startswith("theta_commutation") and not c.ok for c in rep.checks)


# -- centrality and constants


def test_central_one_form_h_plane_r1():
    spec = spec_of("h_plane_r1")
    ok, witness = is_central_one_form(spec, GradedForm.theta(spec, "2"))
    assert ok and witness is None


def test_not_central_quantum_plane():
    spec = spec_of("quantum_plane_a")
    ok, witness = is_central_one_form(spec, GradedForm.theta(spec, "1"))
    assert not ok and witness is not None


def test_zero_form_central():
    spec = spec_of("quantum_plane_a")
    assert is_central_one_form(spec, GradedForm.zero(spec))[0]


def test_central_probe_simple_presets():
    for pid in ["poly_shift_S12", "group_lattice_z3"]:
        spec = spec_of(pid)
        assert not central_one_forms_probe(spec, 2)


def test_central_probe_finds_h_plane_r1_witness():
    spec = spec_of("h_plane_r1")
    hits = central_one_forms_probe(spec, 1)
    assert "2" in hits  # theta^2 is central, so a_2 = const qualifies


def test_constants_z3():
    spec = spec_of("z3_root_of_unity")
    x, y = spec.pres.gen("x"), spec.pres.gen("y")
    got = constants(spec, [x ** 3, y ** 3, x * y, y * x, x, spec.pres.one])
    assert len(got) == 5  # all but the bare x
    assert spec.pres.one in got


def test_one_always_constant():
    for pid in ["quantum_plane_a", "twisted_heisenberg_2", "glpq2"]:
        spec = spec_of(pid)
        assert constants(spec, [spec.pres.one]) == [spec.pres.one]


# -- solve_theta_in_differentials


def test_solve_theta_shift():
    spec = spec_of("poly_shift_S12")
    x = spec.pres.gen("x")
    sol = solve_theta_in_differentials(spec, [x, x * x])
    assert sol.ok
    dx, dx2 = differential(spec, x), differential(spec, x * x)
    assert theta_solution_form(spec, sol, [x, x * x], "1") == \
        (2 * (1 + x)) * dx - dx2
    assert theta_solution_form(spec, sol, [x, x * x], "2") == \
        -(Scalar.from_int(1) / 2 + x) * dx + (Scalar.from_int(1) / 2) * dx2


def test_solve_theta_quantum_torus_closed_form():
    spec = spec_of("quantum_torus")
    al, be, ga, de, t1, t2 = params("alpha beta gamma delta t1 t2")
    A, B = (1 - al) / t1, (1 - be) / t1
    C, D = (1 - ga) / t2, (1 - de) / t2
    x, y = spec.pres.gen("x"), spec.pres.gen("y")
    xi, yi = spec.pres.gen("x", -1), spec.pres.gen("y", -1)
    dx, dy = differential(spec, x), differential(spec, y)
    det = A * D - B * C
    assert det.inverse() * (D * (dx * xi) - C * (dy * yi)) == theta(spec, "1")
    assert det.inverse() * (A * (dy * yi) - B * (dx * xi)) == theta(spec, "2")
    sol = solve_theta_in_differentials(spec, [x, y])
    assert sol.ok
    assert theta_solution_form(spec, sol, [x, y], "1") == theta(spec, "1")


def test_solve_theta_singular_matrix_returned():
    spec = spec_of("poly_shift_S12")
    x = spec.pres.gen("x")
    sol = solve_theta_in_differentials(spec, [x, x])  # duplicate coordinate
    assert not sol.ok
    assert sol.matrix is not None and len(sol.matrix) == 2


def test_solve_theta_z3():
    spec = spec_of("z3_root_of_unity")
    x, y = spec.pres.gen("x"), spec.pres.gen("y")
    sol = solve_theta_in_differentials(spec, [x, y])
    assert sol.ok
    assert theta_solution_form(spec, sol, [x, y], "1") == theta(spec, "1")
    assert theta_solution_form(spec, sol, [x, y], "2") == theta(spec, "2")


# -- form parsing round trip


def test_form_parse_round_trip():
    for pid in ["quantum_plane_a", "h_plane", "z3_root_of_unity"]:
        spec = spec_of(pid)
        x = spec.pres.gen(spec.pres.generators[-1].name)
        forms = [differential(spec, x), vartheta(spec),
                 x * theta(spec, spec.directions.labels[0])]
        for f in forms:
            assert parse_form(spec, str(f)) == f
