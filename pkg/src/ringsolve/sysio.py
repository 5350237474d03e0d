"""Ring-spec grammar and the line-based file formats for systems, matrices
and certificates.

Ring specs: ``Z/12``, ``GR(4,2)``, ``Z/4[X]/(X^2+X+1)``, ``Z/2 x Z/3``,
``table:<path>`` (JSON add/mul tables), plus the derived forms
``phi(<group>)`` and ``local(<ring>, <element>)`` so every ring a reduction
can produce is round-trippable.

Writers rename row/column ids to ``e0,e1,...`` / ``x0,x1,...`` (sorted by
their string form), which keeps files whitespace-tokenisable; re-parsing
yields a system isomorphic to the original on ids.
"""

from __future__ import annotations

import itertools
import json
import re
from pathlib import Path

from .errors import SpecParseError
from .linsys import (
    Certificate,
    GroupSystem,
    LinSystem,
    NumericalSystem,
    TwoSidedSystem,
    UnsolvableWitness,
)
from .matalg import Matrix
from .ring import (
    AbelianGroup,
    FiniteRing,
    Poly,
    build_cyclic_group,
    build_poly_quotient,
    build_product,
    build_product_group,
    build_table_ring,
    build_zmod,
)


def _split_top_level(text: str, sep: str) -> list[str]:
    parts, depth, current = [], 0, []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if depth == 0 and text.startswith(sep, i):
            parts.append("".join(current))
            current = []
            i += len(sep)
            continue
        current.append(ch)
        i += 1
    parts.append("".join(current))
    return parts


def _parse_poly(text: str, modulus: int) -> Poly:
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    body = body.replace(" ", "")
    if not body:
        raise SpecParseError("empty polynomial")
    terms = re.findall(r"[+-]?[^+-]+", body)
    degree = 0
    parsed = []
    for term in terms:
        m = re.fullmatch(r"([+-]?)(\d+)?\*?(X(?:\^(\d+))?)?", term)
        if not m or (m.group(2) is None and m.group(3) is None):
            raise SpecParseError(f"bad polynomial term {term!r}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = int(m.group(2)) if m.group(2) is not None else 1
        if m.group(3) is None:
            power = 0
        elif m.group(4) is not None:
            power = int(m.group(4))
        else:
            power = 1
        parsed.append((power, sign * coeff))
        degree = max(degree, power)
    coeffs = [0] * (degree + 1)
    for power, c in parsed:
        coeffs[power] = (coeffs[power] + c) % modulus
    return Poly.of(coeffs)


def _factor_prime_power(q: int) -> tuple[int, int]:
    p = 2
    while p * p <= q:
        if q % p == 0:
            n, v = 0, q
            while v % p == 0:
                v //= p
                n += 1
            if v != 1:
                raise SpecParseError(f"{q} is not a prime power")
            return p, n
        p += 1
    return q, 1


def _poly_divides_mod_p(div: list[int], poly: list[int], p: int) -> bool:
    work = [c % p for c in poly]
    d = len(div) - 1
    inv_lead = pow(div[-1], -1, p)
    for k in range(len(work) - 1, d - 1, -1):
        c = (work[k] * inv_lead) % p
        if c:
            for t in range(d + 1):
                work[k - d + t] = (work[k - d + t] - c * div[t]) % p
    return all(c == 0 for c in work)


def _is_irreducible_mod_p(coeffs: list[int], p: int) -> bool:
    r = len(coeffs) - 1
    for d in range(1, r // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            div = list(tail) + [1]
            if _poly_divides_mod_p(div, coeffs, p):
                return False
    return True


def smallest_galois_polynomial(p: int, n: int, r: int) -> Poly:
    """The lexicographically least monic degree-r polynomial over Z_p that is
    irreducible mod p, lifted coefficientwise to Z_{p^n}."""
    for tail in itertools.product(range(p), repeat=r):
        coeffs = list(tail) + [1]
        if _is_irreducible_mod_p(coeffs, p):
            return Poly(tuple(coeffs))
    raise SpecParseError(f"no irreducible polynomial of degree {r} over Z/{p}")


def build_galois_ring(q: int, r: int) -> FiniteRing:
    p, n = _factor_prime_power(q)
    ring = build_poly_quotient(p, n, smallest_galois_polynomial(p, n, r))
    ring.spec_alias = f"GR({q},{r})"
    return ring


def parse_ring_spec(text: str) -> FiniteRing:
    """Construct a ring from its spec string."""
    text = text.strip()
    if not text:
        raise SpecParseError("empty ring spec")
    factors = _split_top_level(text, " x ")
    if len(factors) > 1:
        return build_product([parse_ring_spec(f) for f in factors])
    if text.startswith("table:"):
        return _parse_table_ring(Path(text[len("table:"):]))
    m = re.fullmatch(r"GR\((\d+),(\d+)\)", text)
    if m:
        return build_galois_ring(int(m.group(1)), int(m.group(2)))
    m = re.fullmatch(r"Z/(\d+)\[X\]/(\(.*\))", text)
    if m:
        q = int(m.group(1))
        p, n = _factor_prime_power(q)
        return build_poly_quotient(p, n, _parse_poly(m.group(2), q))
    m = re.fullmatch(r"Z/(\d+)", text)
    if m:
        return build_zmod(int(m.group(1)))
    m = re.fullmatch(r"phi\((.*)\)", text)
    if m:
        from .reductions import build_phi_ring

        return build_phi_ring(parse_group_spec(m.group(1)))
    m = re.fullmatch(r"local\((.*),\s*([^,()]+)\)", text)
    if m:
        from .structure import decompose_local

        parent = parse_ring_spec(m.group(1))
        wanted = m.group(2).strip()
        for summand in decompose_local(parent):
            if summand.e.name == wanted:
                return summand.ring
        raise SpecParseError(f"{wanted!r} is not a base idempotent of {parent.spec}")
    raise SpecParseError(f"cannot parse ring spec {text!r}")


def _parse_table_ring(path: Path) -> FiniteRing:
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecParseError(f"cannot read table ring file {path}: {exc}")
    for key in ("add", "mul"):
        if key not in data:
            raise SpecParseError(f"table ring file misses the {key!r} table")
    return build_table_ring(
        data["add"],
        data["mul"],
        commutative=data.get("commutative", True),
        names=data.get("names"),
        spec=f"table:{path}",
    )


def write_table_ring(ring: FiniteRing, path: Path):
    add, mul = ring.op_tables()
    path.write_text(json.dumps({
        "add": add,
        "mul": mul,
        "commutative": ring.commutative,
        "names": ring.names,
    }))


def parse_group_spec(text: str) -> AbelianGroup:
    text = text.strip()
    if not text:
        raise SpecParseError("empty group spec")
    factors = _split_top_level(text, " x ")
    if len(factors) > 1:
        return build_product_group([parse_group_spec(f) for f in factors])
    m = re.fullmatch(r"Z/(\d+)", text)
    if m:
        return build_cyclic_group(int(m.group(1)))
    raise SpecParseError(f"cannot parse group spec {text!r}")


# ---------------------------------------------------------------------------
# system files


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line))
    return out


def _parse_term(term: str, lineno: int):
    """Return (kind, coeff_text, var) with kind in {'left', 'right', 'bare'}."""
    term = term.strip()
    if not term:
        raise SpecParseError("empty term", lineno)
    if "*" not in term:
        return ("bare", None, term)
    head, tail = term.rsplit("*", 1)
    head, tail = head.strip(), tail.strip()
    if re.fullmatch(r"[A-Za-z_]\w*", tail):
        return ("left", head, tail)
    if re.fullmatch(r"[A-Za-z_]\w*", head):
        return ("right", tail, head)
    raise SpecParseError(f"cannot parse term {term!r}", lineno)


def parse_system(text: str):
    """Parse a system file into the matching system type."""
    lines = _content_lines(text)
    if not lines:
        raise SpecParseError("empty system file")
    lineno, header = lines[0]
    parts = header.split(None, 1)
    if len(parts) != 2 or parts[0] not in {"ring", "group", "twosided", "numerical"}:
        raise SpecParseError(f"bad header {header!r}", lineno)
    kind, spec = parts
    if kind == "group":
        carrier = parse_group_spec(spec)
    else:
        carrier = parse_ring_spec(spec)
        if kind == "numerical":
            from .ring import additive_group

            carrier = additive_group(carrier)
    variables: list[str] = []
    rows, left, right, b = [], {}, {}, {}
    eqno = 0
    for lineno, line in lines[1:]:
        if line.startswith("vars"):
            variables.extend(line.split()[1:])
            continue
        if not line.startswith("eq"):
            raise SpecParseError(f"unexpected line {line!r}", lineno)
        body = line[2:].strip()
        if ":" in body.split("=", 1)[0]:
            rid, body = body.split(":", 1)
            rid = rid.strip()
        else:
            eqno += 1
            rid = f"e{eqno}"
        if "=" not in body:
            raise SpecParseError("equation misses '='", lineno)
        lhs, rhs = body.rsplit("=", 1)
        rows.append(rid)
        rhs = rhs.strip()
        if rhs not in ("0", ""):
            b[rid] = _parse_rhs(kind, carrier, rhs, lineno)
        lhs = lhs.strip()
        if lhs in ("", "0"):
            continue
        for term in _split_top_level(lhs, "+"):
            side, coeff_text, var = _parse_term(term, lineno)
            if var not in variables:
                raise SpecParseError(f"variable {var!r} not declared in vars", lineno)
            _accumulate_term(kind, carrier, left, right, rid, side, coeff_text, var, lineno)
    if not variables:
        raise SpecParseError("no variables declared")
    if not rows:
        raise SpecParseError("no equations")
    if kind == "ring":
        ring = carrier
        return LinSystem(ring, rows, variables, left, b)
    if kind == "group":
        return GroupSystem(carrier, rows, variables, left, b)
    if kind == "numerical":
        return NumericalSystem(carrier, rows, variables, left, b)
    return TwoSidedSystem(carrier, rows, variables, left, right, b)


def _parse_rhs(kind, carrier, rhs, lineno):
    try:
        return carrier.parse_element(rhs).index
    except Exception:
        raise SpecParseError(f"bad right-hand side {rhs!r}", lineno)


def _accumulate_term(kind, carrier, left, right, rid, side, coeff_text, var, lineno):
    if kind == "group":
        coeff = 1 if coeff_text is None else _parse_int(coeff_text, lineno)
        left[(rid, var)] = left.get((rid, var), 0) + coeff
        return
    ring = carrier.ring if hasattr(carrier, "ring") else carrier  # numerical uses the group
    if kind == "numerical":
        group = carrier
        coeff = group.identity.index if coeff_text is None else _parse_carrier(group, coeff_text, lineno)
        prev = left.get((rid, var))
        left[(rid, var)] = coeff if prev is None else group.add_idx(prev, coeff)
        return
    coeff = 1 if coeff_text is None else None
    if coeff is None:
        coeff = _parse_carrier(carrier, coeff_text, lineno)
    else:
        coeff = carrier.one.index
    if side == "right" and kind == "twosided":
        key = (var, rid)
        prev = right.get(key)
        right[key] = coeff if prev is None else carrier.add_idx(prev, coeff)
    else:
        key = (rid, var)
        prev = left.get(key)
        left[key] = coeff if prev is None else carrier.add_idx(prev, coeff)


def _parse_int(text, lineno):
    try:
        return int(text)
    except ValueError:
        raise SpecParseError(f"bad integer coefficient {text!r}", lineno)


def _parse_carrier(carrier, text, lineno):
    try:
        return carrier.parse_element(text).index
    except Exception:
        raise SpecParseError(f"bad coefficient {text!r}", lineno)


def _rename(ids, prefix):
    ordered = sorted(ids, key=str)
    return {i: f"{prefix}{k}" for k, i in enumerate(ordered)}, ordered


def write_system(system) -> str:
    """Serialise a system deterministically (ids renamed, sorted)."""
    lines = []
    if isinstance(system, LinSystem):
        header, carrier = f"ring {system.ring.spec}", system.ring
    elif isinstance(system, GroupSystem):
        header, carrier = f"group {system.group.spec}", system.group
    elif isinstance(system, NumericalSystem):
        base = system.group.spec
        base = base[1:-3] if base.startswith("(") and base.endswith(",+)") else base
        header, carrier = f"numerical {base}", system.group
    elif isinstance(system, TwoSidedSystem):
        header, carrier = f"twosided {system.ring.spec}", system.ring
    else:
        raise SpecParseError(f"cannot serialise {type(system).__name__}")
    lines.append(header)
    col_map, col_order = _rename(system.cols, "x")
    row_map, row_order = _rename(system.rows, "e")
    lines.append("vars " + " ".join(col_map[j] for j in col_order))
    for i in row_order:
        terms = []
        for j in col_order:
            if isinstance(system, TwoSidedSystem):
                if (i, j) in system.left:
                    terms.append(f"{system.ring.format_element(system.left[(i, j)])}*{col_map[j]}")
                if (j, i) in system.right:
                    terms.append(f"{col_map[j]}*{system.ring.format_element(system.right[(j, i)])}")
            else:
                v = system.entries.get((i, j))
                if v is not None:
                    if isinstance(system, GroupSystem):
                        terms.append(f"{v}*{col_map[j]}")
                    elif isinstance(system, NumericalSystem):
                        terms.append(f"{system.group.format_element(v)}*{col_map[j]}")
                    else:
                        terms.append(f"{system.ring.format_element(v)}*{col_map[j]}")
        lhs = " + ".join(terms) if terms else "0"
        if isinstance(system, GroupSystem):
            rhs = system.group.format_element(system.rhs_idx(i))
        elif isinstance(system, NumericalSystem):
            rhs = system.group.format_element(system.rhs_idx(i))
        else:
            rhs = system.ring.format_element(system.rhs_idx(i))
        lines.append(f"eq {row_map[i]}: {lhs} = {rhs}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# matrix files


def parse_matrix(text: str) -> Matrix:
    """Matrix file: ring header, rows/cols headers, one `row` line per row id."""
    lines = _content_lines(text)
    if not lines:
        raise SpecParseError("empty matrix file")
    lineno, header = lines[0]
    if not header.startswith("ring "):
        raise SpecParseError("matrix files start with a ring header", lineno)
    ring = parse_ring_spec(header[5:])
    rows: list[str] = []
    cols: list[str] = []
    entries = {}
    for lineno, line in lines[1:]:
        if line.startswith("rows"):
            rows.extend(line.split()[1:])
        elif line.startswith("cols"):
            cols.extend(line.split()[1:])
        elif line.startswith("row"):
            body = line[3:].strip()
            if ":" not in body:
                raise SpecParseError("row line misses ':'", lineno)
            rid, terms = body.split(":", 1)
            rid = rid.strip()
            if rid not in rows:
                raise SpecParseError(f"unknown row id {rid!r}", lineno)
            terms = terms.strip()
            if terms in ("", "0"):
                continue
            for term in _split_top_level(terms, "+"):
                side, coeff_text, var = _parse_term(term, lineno)
                if side == "right":
                    raise SpecParseError("matrix entries use coeff*col terms", lineno)
                if var not in cols:
                    raise SpecParseError(f"unknown column id {var!r}", lineno)
                coeff = ring.one.index if coeff_text is None else _parse_carrier(ring, coeff_text, lineno)
                entries[(rid, var)] = coeff
        else:
            raise SpecParseError(f"unexpected line {line!r}", lineno)
    if not rows or not cols:
        raise SpecParseError("matrix needs rows and cols headers")
    return Matrix(ring, rows, cols, entries)


def write_matrix(matrix: Matrix) -> str:
    ring = matrix.ring
    col_map, col_order = _rename(matrix.cols, "c")
    row_map, row_order = _rename(matrix.rows, "r")
    lines = [f"ring {ring.spec}"]
    lines.append("rows " + " ".join(row_map[i] for i in row_order))
    lines.append("cols " + " ".join(col_map[j] for j in col_order))
    for i in row_order:
        terms = [
            f"{ring.format_element(matrix.entries[(i, j)])}*{col_map[j]}"
            for j in col_order
            if (i, j) in matrix.entries
        ]
        lines.append(f"row {row_map[i]}: " + (" + ".join(terms) if terms else "0"))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# certificate files


def write_certificate(cert: Certificate, system) -> str:
    lines = [f"certificate {cert.verdict}"]
    if cert.verdict == "SOLVABLE":
        for var in sorted(cert.assignment, key=str):
            value = cert.assignment[var]
            name = value if isinstance(value, int) else value.name
            lines.append(f"assign {var} = {name}")
    else:
        w = cert.witness
        lines.append(f"summand {w.summand}")
        lines.append(f"chain {w.chain_spec}")
        lines.append(f"digest {w.digest}")
        for rid in sorted(w.rows, key=str):
            lines.append(f"witness {rid} = {w.rows[rid]}")
    return "\n".join(lines) + "\n"


def parse_certificate(text: str, system) -> Certificate:
    lines = _content_lines(text)
    if not lines:
        raise SpecParseError("empty certificate file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "certificate":
        raise SpecParseError(f"bad certificate header {header!r}", lineno)
    verdict = parts[1]
    if verdict == "SOLVABLE":
        assignment = {}
        carrier = getattr(system, "ring", None) or getattr(system, "group")
        for lineno, line in lines[1:]:
            m = re.fullmatch(r"assign (.+?) = (.+)", line)
            if not m:
                raise SpecParseError(f"bad assign line {line!r}", lineno)
            var = _match_id(system.cols, m.group(1).strip(), lineno)
            if isinstance(system, NumericalSystem):
                assignment[var] = _parse_int(m.group(2).strip(), lineno)
            else:
                assignment[var] = carrier.parse_element(m.group(2).strip())
        return Certificate("SOLVABLE", assignment=assignment)
    if verdict != "UNSOLVABLE":
        raise SpecParseError(f"unknown verdict {verdict!r}", lineno)
    summand = chain_spec = digest = None
    rows = {}
    for lineno, line in lines[1:]:
        if line.startswith("summand "):
            summand = line[len("summand "):].strip()
        elif line.startswith("chain "):
            chain_spec = line[len("chain "):].strip()
        elif line.startswith("digest "):
            digest = line[len("digest "):].strip()
        elif line.startswith("witness "):
            m = re.fullmatch(r"witness (.+?) = (.+)", line)
            if not m:
                raise SpecParseError(f"bad witness line {line!r}", lineno)
            rows[m.group(1).strip()] = m.group(2).strip()
        else:
            raise SpecParseError(f"unexpected certificate line {line!r}", lineno)
    if summand is None or chain_spec is None or digest is None:
        raise SpecParseError("certificate misses summand/chain/digest fields")
    return Certificate(
        "UNSOLVABLE",
        witness=UnsolvableWitness(summand=summand, chain_spec=chain_spec, digest=digest, rows=rows),
    )


def _match_id(ids, text, lineno):
    for i in ids:
        if str(i) == text:
            return i
    raise SpecParseError(f"id {text!r} does not occur in the system", lineno)
