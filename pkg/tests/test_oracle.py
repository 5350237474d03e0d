from __future__ import annotations

import pytest

from conftest import bivariate_nilpotent, f4, gr42, random_linsystem, upper_triangular_f2, zmod
from ringsolve import (
    CapacityError,
    LinSystem,
    Matrix,
    build_phi_ring,
    build_cyclic_group,
    build_table_ring,
)
from ringsolve.oracle import (
    brute_force_solve,
    charpoly_cofactor,
    check_group_axioms,
    check_ring_axioms,
    det_cofactor,
    enumerate_gl,
)
from ringsolve.ring import units
from ringsolve.structure import decompose_local


def test_axioms_pass_on_fixture_rings():
    fixtures = [zmod(12), f4(), gr42(), bivariate_nilpotent(), upper_triangular_f2()]
    for ring in fixtures:
        report = check_ring_axioms(ring)
        assert report.ok, (ring.spec, report.failed_axiom)


def test_axioms_pass_on_local_summands():
    for ring in (zmod(6), zmod(12)):
        for summand in decompose_local(ring):
            assert check_ring_axioms(summand.ring).ok


def test_axioms_pass_on_phi_rings():
    for g in (build_cyclic_group(3), build_cyclic_group(4)):
        assert check_ring_axioms(build_phi_ring(g)).ok


def test_mangled_multiplication_fails_distributivity():
    z4 = zmod(4)
    add, mul = z4.op_tables()
    bad = [row[:] for row in mul]
    bad[2][3] = 1  # 2*3 := 1
    ring = build_table_ring(add, [row[:] for row in mul], _validate=False)
    ring._cache["tables"] = (add, bad)
    ring._mul = lambda i, j: bad[i][j]
    report = check_ring_axioms(ring)
    assert not report.ok
    assert report.failed_axiom is not None


def test_group_axiom_checker():
    g = build_cyclic_group(6)
    assert check_group_axioms(g).ok


def test_brute_force_examples():
    z4 = zmod(4)
    unsat = LinSystem(z4, ["e"], ["x"], {("e", "x"): 2}, {"e": 1})
    rep = brute_force_solve(unsat)
    assert not rep.solvable and rep.instances_checked == 4
    sat = LinSystem(z4, ["e"], ["x"], {("e", "x"): 2}, {"e": 2})
    rep = brute_force_solve(sat)
    assert rep.solvable and rep.witness["x"].index == 1
    trivial = LinSystem(z4, ["e"], ["x"], {}, {})
    assert brute_force_solve(trivial).solvable


def test_brute_force_capacity():
    z4 = zmod(4)
    cols = [f"x{i}" for i in range(13)]  # 4^13 > 1e7
    system = LinSystem(z4, ["e"], cols, {("e", cols[0]): 1}, {"e": 1})
    with pytest.raises(CapacityError):
        brute_force_solve(system)


def test_vectorised_path_agrees_with_known_instances(rng):
    z2 = zmod(2)
    cols = [f"x{i}" for i in range(13)]  # 2^13 forces the numpy path
    rows = ["e1", "e2"]
    sat = LinSystem(
        z2, rows, cols,
        {("e1", c): 1 for c in cols} | {("e2", cols[0]): 1},
        {"e1": 1, "e2": 1},
    )
    rep = brute_force_solve(sat)
    assert rep.solvable
    assert sat.eval(rep.witness)
    unsat_entries = {("e1", c): 1 for c in cols} | {("e2", c): 1 for c in cols}
    unsat = LinSystem(z2, rows, cols, unsat_entries, {"e1": 1, "e2": 0})
    rep = brute_force_solve(unsat)
    assert not rep.solvable


def test_enumerate_gl_dimension_one_counts_units():
    for ring in (zmod(6), f4(), zmod(9)):
        assert enumerate_gl(ring, 1) == len(units(ring))


def test_det_cofactor_examples():
    z9 = zmod(9)
    assert det_cofactor(Matrix(z9, ["i"], ["i"], {("i", "i"): 7})).index == 7
    swap = Matrix(z9, [0, 1], [0, 1], {(0, 1): 1, (1, 0): 1})
    assert det_cofactor(swap).index == 8


def test_charpoly_cofactor_diag_over_z6():
    z6 = zmod(6)
    m = Matrix(z6, [0, 1], [0, 1], {(0, 0): 2, (1, 1): 3})
    chi = charpoly_cofactor(m)
    # (X-2)(X-3) = X^2 + X + 0 over Z/6
    assert [c.index for c in chi.coefficients] == [0, 1, 1]


def test_cofactor_capacity():
    z2 = zmod(2)
    ids = list(range(7))
    big = Matrix(z2, ids, ids, {(i, i): 1 for i in ids})
    with pytest.raises(CapacityError):
        det_cofactor(big)


def test_brute_force_random_cross_check_with_eval(rng):
    # every SOLVABLE report must carry a satisfying witness
    for ring in (zmod(6), gr42()):
        for _ in range(25):
            system = random_linsystem(rng, ring, rng.randint(1, 2), rng.randint(1, 2))
            rep = brute_force_solve(system)
            if rep.solvable:
                assert system.eval(rep.witness)
