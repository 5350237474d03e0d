from __future__ import annotations

import itertools
import json

import pytest

from conftest import upper_triangular_f2, zmod
from ringsolve import LinSystem, SpecParseError, parse_ring_spec, verify_certificate
from ringsolve.cli import main
from ringsolve.oracle import brute_force_solve
from ringsolve.sysio import (
    parse_certificate,
    parse_group_spec,
    parse_matrix,
    parse_system,
    write_certificate,
    write_matrix,
    write_system,
    write_table_ring,
)


def test_parse_ring_spec_examples(tmp_path):
    assert parse_ring_spec("Z/12").size == 12
    gr = parse_ring_spec("GR(4,2)")
    assert gr.size == 16 and gr.characteristic() == 4
    prod = parse_ring_spec("Z/2 x Z/3")
    assert prod.size == 6 and prod.commutative
    poly = parse_ring_spec("Z/4[X]/(X^2+X+1)")
    assert poly.size == 16
    path = tmp_path / "ut2.json"
    write_table_ring(upper_triangular_f2(), path)
    table = parse_ring_spec(f"table:{path}")
    assert table.size == 8 and not table.commutative
    phi = parse_ring_spec("phi(Z/2)")
    assert phi.size == 4
    local = parse_ring_spec("local(Z/6, 3)")
    assert local.size == 2


def test_parse_ring_spec_product_isomorphic_to_z6():
    prod = parse_ring_spec("Z/2 x Z/3")
    z6 = zmod(6)
    image = [prod.scalar_idx(k, prod.one.index) for k in range(6)]
    assert len(set(image)) == 6
    for a, b in itertools.product(range(6), repeat=2):
        assert image[z6.mul_idx(a, b)] == prod.mul_idx(image[a], image[b])


def test_parse_ring_spec_errors():
    with pytest.raises(SpecParseError):
        parse_ring_spec("Q/5")
    with pytest.raises(SpecParseError):
        parse_ring_spec("GR(6,2)")  # 6 is not a prime power
    with pytest.raises(SpecParseError):
        parse_group_spec("GR(4,2)")


def test_system_round_trip_is_stable():
    z4 = zmod(4)
    system = LinSystem(
        z4, ["rowB", "rowA"], ["beta", "alpha"],
        {("rowB", "beta"): 2, ("rowA", "alpha"): 3, ("rowA", "beta"): 1},
        {"rowB": 1},
    )
    text = write_system(system)
    reparsed = parse_system(text)
    assert write_system(reparsed) == text
    assert brute_force_solve(system).solvable == brute_force_solve(reparsed).solvable


def test_twosided_file_round_trip(tmp_path):
    ring = upper_triangular_f2()
    path = tmp_path / "ring.json"
    write_table_ring(ring, path)
    text = "\n".join([
        f"twosided table:{path}",
        "vars x y",
        "eq 3*x + y*2 = 5",
    ])
    system = parse_system(text)
    assert system.left and system.right
    out = write_system(system)
    again = parse_system(out)
    assert write_system(again) == out
    assert brute_force_solve(system).solvable == brute_force_solve(again).solvable


def test_group_file_round_trip():
    text = "\n".join([
        "group Z/2 x Z/4",
        "vars x y",
        "eq 1*x + 2*y = (1,3)",
    ])
    system = parse_system(text)
    out = write_system(system)
    assert write_system(parse_system(out)) == out


def test_matrix_round_trip():
    text = "\n".join([
        "ring Z/9",
        "rows a b",
        "cols a b",
        "row a: 2*a + 1*b",
        "row b: 3*b",
    ])
    m = parse_matrix(text)
    out = write_matrix(m)
    assert write_matrix(parse_matrix(out)) == out


def test_certificate_round_trip_solvable():
    z4 = zmod(4)
    from ringsolve import solve_commutative

    system = LinSystem(z4, ["e"], ["x"], {("e", "x"): 2}, {"e": 2})
    cert = solve_commutative(system)
    text = write_certificate(cert, system)
    cert2 = parse_certificate(text, system)
    assert verify_certificate(system, cert2)


def test_certificate_round_trip_witness():
    z4 = zmod(4)
    from ringsolve import solve_commutative

    system = LinSystem(z4, ["e"], ["x"], {("e", "x"): 2}, {"e": 1})
    cert = solve_commutative(system)
    text = write_certificate(cert, system)
    cert2 = parse_certificate(text, system)
    assert verify_certificate(system, cert2)


# ---------------------------------------------------------------------------
# CLI driver


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_cli_solve_exit_codes(tmp_path, capsys):
    sat = _write(tmp_path, "sat.rls", "ring Z/4\nvars x\neq 2*x = 2\n")
    unsat = _write(tmp_path, "unsat.rls", "ring Z/4\nvars x\neq 2*x = 1\n")
    assert main(["solve", sat]) == 0
    assert main(["solve", unsat]) == 1
    assert main(["solve", str(tmp_path / "missing.rls")]) == 2
    bad = _write(tmp_path, "bad.rls", "ring Z/4\nvars x\neq nonsense\n")
    assert main(["solve", bad]) == 2
    capsys.readouterr()


def test_cli_solve_oracle_check_and_json(tmp_path, capsys):
    sat = _write(tmp_path, "sat.rls", "ring Z/6\nvars x y\neq 2*x + 3*y = 5\n")
    assert main(["solve", sat, "--oracle-check", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["verdict"] == "SOLVABLE"
    assert set(payload["assignment"]) == {"x", "y"}


def test_cli_solve_then_verify(tmp_path, capsys):
    unsat = _write(tmp_path, "unsat.rls", "ring Z/6\nvars x\neq 2*x = 1\n")
    cert_path = str(tmp_path / "cert.txt")
    assert main(["solve", unsat, "-o", cert_path]) == 1
    assert main(["verify", unsat, cert_path]) == 0
    capsys.readouterr()


def test_cli_reduce_complement_flips_verdict(tmp_path, capsys):
    unsat = _write(tmp_path, "unsat.rls", "ring Z/4\nvars x\neq 2*x = 1\n")
    out = str(tmp_path / "comp.rls")
    assert main(["reduce", "complement", unsat, "-o", out]) == 0
    assert main(["solve", out]) == 0  # complement of unsolvable is solvable
    capsys.readouterr()


def test_cli_reduce_twosided_then_solve(tmp_path, capsys):
    ring_path = tmp_path / "ut2.json"
    write_table_ring(upper_triangular_f2(), ring_path)
    src = _write(
        tmp_path, "ts.rls",
        f"twosided table:{ring_path}\nvars x\neq x*7 = 1\n",
    )
    out = str(tmp_path / "numerical.rls")
    assert main(["reduce", "twosided-numerical", src, "-o", out]) == 0
    assert main(["solve", out]) == 0
    capsys.readouterr()


def test_cli_reduce_or_general_trace(tmp_path, capsys):
    a = _write(tmp_path, "a.rls", "ring Z/2\nvars x\neq 1*x = 1\n")
    b = _write(tmp_path, "b.rls", "ring Z/3\nvars x\neq 1*x = 1\n")
    out = str(tmp_path / "org.rls")
    assert main(["reduce", "or-general", a, b, "-o", out, "--trace"]) == 0
    trace = capsys.readouterr().out
    assert "experimental" in trace


def test_cli_reduce_collapse_manifest(tmp_path, capsys):
    inner_s = _write(tmp_path, "inner_s.rls", "ring Z/2\nvars y\neq 1*y = 1\n")
    inner_u = _write(tmp_path, "inner_u.rls", "ring Z/2\nvars y\neq 0 = 1\n")
    manifest = _write(
        tmp_path, "collapse.txt",
        "outer-rows a\nouter-cols b1 b2\n"
        f"inner a b1 {inner_s}\ninner a b2 {inner_u}\n",
    )
    out = str(tmp_path / "collapsed.rls")
    assert main(["reduce", "collapse", manifest, "-o", out]) == 0
    assert main(["solve", out]) == 0
    capsys.readouterr()


def test_cli_mat_and_oracle(tmp_path, capsys):
    mat = _write(
        tmp_path, "m.rls",
        "ring Z/4\nrows a b\ncols a b\nrow a: 1*a + 2*b\nrow b: 1*b\n",
    )
    assert main(["mat", "inverse", mat]) == 0
    assert main(["mat", "det", mat]) == 0
    assert main(["mat", "charpoly", mat]) == 0
    assert main(["mat", "pow", mat, "--exponent", str(1 << 70)]) == 0
    assert main(["oracle", "det", mat]) == 0
    assert main(["oracle", "gl", "Z/4", "2"]) == 0
    out = capsys.readouterr().out
    assert "96" in out


def test_cli_outputs_are_deterministic(tmp_path, capsys):
    src = _write(tmp_path, "s.rls", "ring Z/6\nvars b a\neq 4*a + 2*b = 2\n")
    out1, out2 = str(tmp_path / "o1.rls"), str(tmp_path / "o2.rls")
    assert main(["reduce", "normal-form", src, "-o", out1]) == 0
    assert main(["reduce", "normal-form", src, "-o", out2]) == 0
    assert (tmp_path / "o1.rls").read_bytes() == (tmp_path / "o2.rls").read_bytes()
    capsys.readouterr()


def test_cli_ring_subcommands(capsys):
    assert main(["ring", "info", "Z/12"]) == 0
    assert main(["ring", "decompose", "Z/12"]) == 0
    assert main(["ring", "order", "GR(4,2)"]) == 0
    out = capsys.readouterr().out
    assert "alpha" in out and "order" in out


# ---------------------------------------------------------------------------
# shipped corpus


def _corpus_root():
    from pathlib import Path

    return Path(__file__).resolve().parents[1] / "corpus"


def test_corpus_oracle_check_never_mismatches(monkeypatch, capsys):
    root = _corpus_root()
    monkeypatch.chdir(root.parent)  # table: paths are cwd-relative
    for path in sorted(root.glob("*.rls")):
        if path.name.startswith("matrix"):
            continue
        code = main(["solve", str(path), "--oracle-check"])
        assert code in (0, 1), path.name
    capsys.readouterr()


def test_corpus_files_round_trip(monkeypatch):
    root = _corpus_root()
    monkeypatch.chdir(root.parent)
    for path in sorted(root.glob("*.rls")):
        text = path.read_text()
        if path.name.startswith("matrix"):
            out = write_matrix(parse_matrix(text))
            assert write_matrix(parse_matrix(out)) == out
        else:
            out = write_system(parse_system(text))
            assert write_system(parse_system(out)) == out
