"""Linear equation systems over rings and groups, with certified solvers.

Systems carry unordered row/column id sets; entries are stored sparsely as
element indices.  The chain-ring solver produces either a satisfying
assignment or a row-combination witness x with x·(A|b) = (0,...,0,pi^(n-1)),
and the composed solvers reduce arbitrary commutative rings, abelian groups
and two-sided non-commutative systems to that case.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import (
    InternalError,
    InvalidCertificate,
    InvalidParameter,
    PreconditionViolation,
    Unsupported,
)
from .ring import AbelianGroup, FiniteRing, GroupElement, RingElement, build_zmod, group_decompose_cyclic
from .structure import ChainData, chain_data, decompose_local, default_order


def _norm_idx(value, carrier) -> int:
    if isinstance(value, (RingElement, GroupElement)):
        owner = value.ring if isinstance(value, RingElement) else value.group
        if owner is not carrier:
            raise InvalidParameter("entry belongs to a different ring/group")
        return value.index
    if isinstance(value, int):
        if not 0 <= value < carrier.size:
            raise InvalidParameter(f"element index {value} out of range")
        return value
    raise InvalidParameter(f"cannot interpret {value!r} as an element")


def _sort_key(x):
    return str(x)


class LinSystem:
    """A·x = b over a finite ring, with opaque row/column ids."""

    def __init__(self, ring: FiniteRing, rows: Sequence, cols: Sequence,
                 entries: Mapping, b: Mapping):
        if not rows or not cols:
            raise InvalidParameter("row and column id sets must be non-empty")
        self.ring = ring
        self.rows = list(dict.fromkeys(rows))
        self.cols = list(dict.fromkeys(cols))
        row_set, col_set = set(self.rows), set(self.cols)
        self.entries: dict = {}
        zero = ring.zero.index
        for (i, j), v in entries.items():
            if i not in row_set or j not in col_set:
                raise InvalidParameter(f"entry ({i!r},{j!r}) outside the index sets")
            idx = _norm_idx(v, ring)
            if idx != zero:
                self.entries[(i, j)] = idx
        self.b: dict = {}
        for i, v in b.items():
            if i not in row_set:
                raise InvalidParameter(f"rhs for unknown row {i!r}")
            idx = _norm_idx(v, ring)
            if idx != zero:
                self.b[i] = idx

    def entry_idx(self, i, j) -> int:
        return self.entries.get((i, j), self.ring.zero.index)

    def entry(self, i, j) -> RingElement:
        return self.ring.element(self.entry_idx(i, j))

    def rhs_idx(self, i) -> int:
        return self.b.get(i, self.ring.zero.index)

    def rhs(self, i) -> RingElement:
        return self.ring.element(self.rhs_idx(i))

    def eval(self, assignment: Mapping) -> bool:
        ring = self.ring
        missing = set(self.cols) - set(assignment)
        if missing:
            raise InvalidParameter(f"assignment misses variables {sorted(missing, key=_sort_key)}")
        values = {j: _norm_idx(assignment[j], ring) for j in self.cols}
        for i in self.rows:
            acc = ring.zero.index
            for j in self.cols:
                c = self.entries.get((i, j))
                if c is not None:
                    acc = ring.add_idx(acc, ring.mul_idx(c, values[j]))
            if acc != self.rhs_idx(i):
                return False
        return True

    def canonical_text(self) -> str:
        ring = self.ring
        lines = [f"ring {ring.spec}"]
        for i in sorted(self.rows, key=_sort_key):
            terms = [
                f"{ring.format_element(self.entries[(i, j)])}*{j}"
                for j in sorted(self.cols, key=_sort_key)
                if (i, j) in self.entries
            ]
            lhs = " + ".join(terms) if terms else "0"
            lines.append(f"eq {i}: {lhs} = {ring.format_element(self.rhs_idx(i))}")
        return "\n".join(lines)

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()[:16]

    def __repr__(self):
        return f"LinSystem({self.ring.spec}, {len(self.rows)}x{len(self.cols)})"


class GroupSystem:
    """A·x = b over an abelian group: integer coefficients, group-valued variables.

    The normal form has 0/1 coefficients; arbitrary non-negative integers are
    accepted and treated as repeated summands.
    """

    def __init__(self, group: AbelianGroup, rows: Sequence, cols: Sequence,
                 entries: Mapping, b: Mapping):
        if not rows or not cols:
            raise InvalidParameter("row and column id sets must be non-empty")
        self.group = group
        self.rows = list(dict.fromkeys(rows))
        self.cols = list(dict.fromkeys(cols))
        self.entries: dict = {}
        for (i, j), c in entries.items():
            if not isinstance(c, int) or c < 0:
                raise InvalidParameter("group-system coefficients are non-negative integers")
            if c != 0:
                self.entries[(i, j)] = c
        self.b: dict = {}
        for i, v in b.items():
            idx = _norm_idx(v, group)
            if idx != group.identity.index:
                self.b[i] = idx

    def rhs_idx(self, i) -> int:
        return self.b.get(i, self.group.identity.index)

    def eval(self, assignment: Mapping) -> bool:
        g = self.group
        missing = set(self.cols) - set(assignment)
        if missing:
            raise InvalidParameter(f"assignment misses variables {sorted(missing, key=_sort_key)}")
        values = {j: _norm_idx(assignment[j], g) for j in self.cols}
        for i in self.rows:
            acc = g.identity.index
            for j in self.cols:
                c = self.entries.get((i, j))
                if c:
                    acc = g.add_idx(acc, g.scalar_idx(c, values[j]))
            if acc != self.rhs_idx(i):
                return False
        return True

    def canonical_text(self) -> str:
        g = self.group
        lines = [f"group {g.spec}"]
        for i in sorted(self.rows, key=_sort_key):
            terms = [
                f"{self.entries[(i, j)]}*{j}"
                for j in sorted(self.cols, key=_sort_key)
                if (i, j) in self.entries
            ]
            lhs = " + ".join(terms) if terms else "0"
            lines.append(f"eq {i}: {lhs} = {g.format_element(self.rhs_idx(i))}")
        return "\n".join(lines)

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()[:16]

    def __repr__(self):
        return f"GroupSystem({self.group.spec}, {len(self.rows)}x{len(self.cols)})"


class TwoSidedSystem:
    """A_l·x + (x^t·A_r)^t = b over a possibly non-commutative ring."""

    def __init__(self, ring: FiniteRing, rows: Sequence, cols: Sequence,
                 left: Mapping, right: Mapping, b: Mapping):
        if not rows or not cols:
            raise InvalidParameter("row and column id sets must be non-empty")
        self.ring = ring
        self.rows = list(dict.fromkeys(rows))
        self.cols = list(dict.fromkeys(cols))
        zero = ring.zero.index
        self.left: dict = {}
        for (i, j), v in left.items():
            idx = _norm_idx(v, ring)
            if idx != zero:
                self.left[(i, j)] = idx
        self.right: dict = {}
        for (j, i), v in right.items():
            idx = _norm_idx(v, ring)
            if idx != zero:
                self.right[(j, i)] = idx
        self.b: dict = {}
        for i, v in b.items():
            idx = _norm_idx(v, ring)
            if idx != zero:
                self.b[i] = idx

    def rhs_idx(self, i) -> int:
        return self.b.get(i, self.ring.zero.index)

    def eval(self, assignment: Mapping) -> bool:
        ring = self.ring
        missing = set(self.cols) - set(assignment)
        if missing:
            raise InvalidParameter(f"assignment misses variables {sorted(missing, key=_sort_key)}")
        values = {j: _norm_idx(assignment[j], ring) for j in self.cols}
        for i in self.rows:
            acc = ring.zero.index
            for j in self.cols:
                c = self.left.get((i, j))
                if c is not None:
                    acc = ring.add_idx(acc, ring.mul_idx(c, values[j]))
                c = self.right.get((j, i))
                if c is not None:
                    acc = ring.add_idx(acc, ring.mul_idx(values[j], c))
            if acc != self.rhs_idx(i):
                return False
        return True

    def canonical_text(self) -> str:
        ring = self.ring
        lines = [f"twosided {ring.spec}"]
        for i in sorted(self.rows, key=_sort_key):
            terms = []
            for j in sorted(self.cols, key=_sort_key):
                if (i, j) in self.left:
                    terms.append(f"{ring.format_element(self.left[(i, j)])}*{j}")
                if (j, i) in self.right:
                    terms.append(f"{j}*{ring.format_element(self.right[(j, i)])}")
            lhs = " + ".join(terms) if terms else "0"
            lines.append(f"eq {i}: {lhs} = {ring.format_element(self.rhs_idx(i))}")
        return "\n".join(lines)

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()[:16]

    def __repr__(self):
        return f"TwoSidedSystem({self.ring.spec}, {len(self.rows)}x{len(self.cols)})"


class NumericalSystem:
    """sum_j x_j·A(i,j) = b(i) with group-element coefficients and integer variables.

    This is the carrier produced by the two-sided reduction: variables take
    integer values acting on the additive group (R,+) as a Z-module.
    """

    def __init__(self, group: AbelianGroup, rows: Sequence, cols: Sequence,
                 entries: Mapping, b: Mapping):
        if not rows or not cols:
            raise InvalidParameter("row and column id sets must be non-empty")
        self.group = group
        self.rows = list(dict.fromkeys(rows))
        self.cols = list(dict.fromkeys(cols))
        e = group.identity.index
        self.entries: dict = {}
        for (i, j), v in entries.items():
            idx = _norm_idx(v, group)
            if idx != e:
                self.entries[(i, j)] = idx
        self.b: dict = {}
        for i, v in b.items():
            idx = _norm_idx(v, group)
            if idx != e:
                self.b[i] = idx

    def rhs_idx(self, i) -> int:
        return self.b.get(i, self.group.identity.index)

    def eval(self, assignment: Mapping) -> bool:
        g = self.group
        missing = set(self.cols) - set(assignment)
        if missing:
            raise InvalidParameter(f"assignment misses variables {sorted(missing, key=_sort_key)}")
        for j in self.cols:
            if not isinstance(assignment[j], int):
                raise InvalidParameter("numerical-system assignments are integers")
        for i in self.rows:
            acc = g.identity.index
            for j in self.cols:
                a = self.entries.get((i, j))
                if a is not None:
                    acc = g.add_idx(acc, g.scalar_idx(assignment[j], a))
            if acc != self.rhs_idx(i):
                return False
        return True

    def canonical_text(self) -> str:
        g = self.group
        lines = [f"numerical {g.spec}"]
        for i in sorted(self.rows, key=_sort_key):
            terms = [
                f"{g.format_element(self.entries[(i, j)])}*{j}"
                for j in sorted(self.cols, key=_sort_key)
                if (i, j) in self.entries
            ]
            lhs = " + ".join(terms) if terms else "0"
            lines.append(f"eq {i}: {lhs} = {g.format_element(self.rhs_idx(i))}")
        return "\n".join(lines)

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()[:16]

    def __repr__(self):
        return f"NumericalSystem({self.group.spec}, {len(self.rows)}x{len(self.cols)})"


def eval_system(system, assignment: Mapping) -> bool:
    """True iff the total assignment satisfies every equation."""
    return system.eval(assignment)


# ---------------------------------------------------------------------------
# certificates


@dataclass
class UnsolvableWitness:
    """Replayable unsolvability evidence over a reduced chain system.

    ``summand`` identifies the failing component ("chain" when the system is
    already a chain system, the base idempotent's name for commutative rings,
    or "p=<prime>" for group/two-sided reductions).  ``digest`` pins the
    reduced system the row combination lives on.
    """

    summand: str
    chain_spec: str
    digest: str
    rows: dict


@dataclass
class Certificate:
    verdict: str  # "SOLVABLE" | "UNSOLVABLE"
    assignment: dict | None = None
    witness: UnsolvableWitness | None = None
    reduced: object = field(default=None, repr=False)  # convenience, not serialised

    @property
    def solvable(self) -> bool:
        return self.verdict == "SOLVABLE"


# ---------------------------------------------------------------------------
# chain-ring machinery


def _chain_valuations(ring: FiniteRing, cd: ChainData) -> list[int]:
    """val[x] = largest t <= n with x in pi^t·R (val[0] = n)."""
    if "chainval" in ring._cache:
        return ring._cache["chainval"]
    val = [0] * ring.size
    power = ring.one.index
    for t in range(1, cd.n + 1):
        power = ring.mul_idx(power, cd.pi.index)
        ideal = {ring.mul_idx(power, r) for r in range(ring.size)}
        for x in ideal:
            val[x] = t
    ring._cache["chainval"] = val
    return val


def _divide_exact(ring: FiniteRing, a: int, by: int) -> int:
    for z in range(ring.size):
        if ring.mul_idx(by, z) == a:
            return z
    raise InternalError(f"{ring.format_element(by)} does not divide {ring.format_element(a)}")


@dataclass
class HermiteResult:
    """S·A·T = (Q over zero rows) with a divisibility chain on the diagonal."""

    ring: FiniteRing
    row_ids: list
    col_ids: list
    S: list[list[int]]
    col_perm: list[int]  # col_perm[new] = position in col_ids
    Q: list[list[int]]
    diag: list[int]

    @property
    def rank(self) -> int:
        return len(self.diag)


def _require_chain(ring: FiniteRing) -> ChainData:
    if not ring.commutative:
        raise PreconditionViolation("chain-ring operations require a commutative ring")
    cd = chain_data(ring)
    if cd is None:
        raise PreconditionViolation(f"{ring.spec} is not a chain ring")
    return cd


def _hermite_grid(ring: FiniteRing, grid: list[list[int]], cd: ChainData):
    val = _chain_valuations(ring, cd)
    k = len(grid)
    ell = len(grid[0]) if k else 0
    a = [row[:] for row in grid]
    s = [[ring.one.index if r == c else ring.zero.index for c in range(k)] for r in range(k)]
    perm = list(range(ell))
    zero = ring.zero.index
    t = 0
    for step in range(min(k, ell)):
        best = None
        for r in range(step, k):
            for c in range(step, ell):
                x = a[r][c]
                if x == zero:
                    continue
                key = (val[x], x, r, c)
                if best is None or key < best:
                    best = key
        if best is None:
            break
        _, _, r, c = best
        if r != step:
            a[step], a[r] = a[r], a[step]
            s[step], s[r] = s[r], s[step]
        if c != step:
            for row in a:
                row[step], row[c] = row[c], row[step]
            perm[step], perm[c] = perm[c], perm[step]
        pivot = a[step][step]
        for r2 in range(step + 1, k):
            x = a[r2][step]
            if x == zero:
                continue
            z = _divide_exact(ring, x, pivot)
            for c2 in range(ell):
                a[r2][c2] = ring.sub_idx(a[r2][c2], ring.mul_idx(z, a[step][c2]))
            for c2 in range(k):
                s[r2][c2] = ring.sub_idx(s[r2][c2], ring.mul_idx(z, s[step][c2]))
        t += 1
    for r in range(t, k):
        if any(x != zero for x in a[r]):
            raise InternalError("elimination left a nonzero residual row")
    return a[:t], s, perm, [a[i][i] for i in range(t)]


def hermite_normal_form(matrix) -> HermiteResult:
    """Triangularise a matrix over a chain ring: S·A·T = (Q ; 0)."""
    ring = matrix.ring
    cd = _require_chain(ring)
    rows, cols = list(matrix.rows), list(matrix.cols)
    grid = [[matrix.entry_idx(i, j) for j in cols] for i in rows]
    q, s, perm, diag = _hermite_grid(ring, grid, cd)
    return HermiteResult(ring=ring, row_ids=rows, col_ids=cols, S=s, col_perm=perm, Q=q, diag=diag)


def solve_chain(system: LinSystem) -> Certificate:
    """Solve over a chain ring via Hermite normal form.

    SOLVABLE certificates carry a back-substituted assignment (free
    variables 0); UNSOLVABLE ones a row combination x with
    x·(A|b) = (0,...,0,pi^(n-1)).
    """
    ring = system.ring
    cd = _require_chain(ring)
    rows, cols = list(system.rows), list(system.cols)
    grid = [[system.entry_idx(i, j) for j in cols] for i in rows]
    q, s, perm, diag = _hermite_grid(ring, grid, cd)
    t = len(diag)
    k, ell = len(rows), len(cols)
    bvec = [system.rhs_idx(i) for i in rows]
    bprime = [
        _dot_idx(ring, s[r], bvec)
        for r in range(k)
    ]
    val = _chain_valuations(ring, cd)
    tail = ring.pow_idx(cd.pi.index, cd.n - 1)
    zero = ring.zero.index
    for r in range(k):
        diag_val = val[diag[r]] if r < t else cd.n
        if val[bprime[r]] < diag_val:
            # the r-th transformed row is a certificate of unsolvability
            w = next(
                (wi for wi in range(ring.size) if ring.mul_idx(wi, bprime[r]) == tail),
                None,
            )
            if w is None:
                raise InternalError("no scaling maps the failing row onto the witness tail")
            combo = {
                rows[pos]: ring.mul_idx(w, s[r][pos]) for pos in range(k)
            }
            witness = UnsolvableWitness(
                summand="chain",
                chain_spec=ring.spec,
                digest=system.digest(),
                rows={i: ring.format_element(x) for i, x in combo.items()},
            )
            _assert_witness(system, combo, tail)
            return Certificate("UNSOLVABLE", witness=witness, reduced=system)
    values = [zero] * ell
    for r in range(t - 1, -1, -1):
        rhs = bprime[r]
        for c in range(r + 1, ell):
            rhs = ring.sub_idx(rhs, ring.mul_idx(q[r][c], values[c]))
        values[r] = _divide_exact(ring, rhs, diag[r])
    assignment = {cols[perm[pos]]: ring.element(values[pos]) for pos in range(ell)}
    if not system.eval(assignment):
        raise InternalError("back-substituted assignment fails the system")
    return Certificate("SOLVABLE", assignment=assignment)


def _dot_idx(ring, coeffs, vec):
    acc = ring.zero.index
    for c, v in zip(coeffs, vec):
        acc = ring.add_idx(acc, ring.mul_idx(c, v))
    return acc


def _assert_witness(system: LinSystem, combo: dict, tail: int):
    ring = system.ring
    for j in system.cols:
        acc = ring.zero.index
        for i in system.rows:
            c = system.entries.get((i, j))
            if c is not None:
                acc = ring.add_idx(acc, ring.mul_idx(combo[i], c))
        if acc != ring.zero.index:
            raise InternalError("witness does not annihilate the coefficient columns")
    acc = ring.zero.index
    for i in system.rows:
        acc = ring.add_idx(acc, ring.mul_idx(combo[i], system.rhs_idx(i)))
    if acc != tail:
        raise InternalError("witness misses the pi^(n-1) tail")


def check_witness(system: LinSystem, rows: Mapping) -> bool:
    """Does x·(A|b) = (0,...,0,pi^(n-1)) hold for the given row combination?"""
    ring = system.ring
    cd = _require_chain(ring)
    if set(rows) != set(system.rows):
        raise InvalidCertificate("witness rows do not match the system's rows")
    combo = {i: _norm_idx(v, ring) for i, v in rows.items()}
    tail = ring.pow_idx(cd.pi.index, cd.n - 1)
    try:
        _assert_witness(system, combo, tail)
    except InternalError:
        return False
    return True


# ---------------------------------------------------------------------------
# composed solvers


def solve_commutative(system: LinSystem) -> Certificate:
    """Decide solvability over any finite commutative ring.

    Pipeline: local decomposition, canonical order per summand, reduction to
    the cyclic group Z_{p^a}, Hermite solve; assignments are mapped back
    through every reduction.
    """
    from . import reductions

    ring = system.ring
    if not ring.commutative:
        raise Unsupported("solve_commutative requires a commutative ring")
    total = {j: ring.zero.index for j in system.cols}
    for summand in decompose_local(ring):
        sub = reductions.project_to_local(system, summand.e)
        order = default_order(summand.ring)
        red = reductions.ring_to_cyclic(sub, order)
        cert = solve_chain(red.target)
        if not cert.solvable:
            witness = UnsolvableWitness(
                summand=summand.e.name,
                chain_spec=red.target.ring.spec,
                digest=cert.witness.digest,
                rows=cert.witness.rows,
            )
            return Certificate("UNSOLVABLE", witness=witness, reduced=red.target)
        back = red.backward(cert.assignment)
        for j, elem in back.items():
            total[j] = ring.add_idx(total[j], summand.embed(elem.index))
    assignment = {j: ring.element(v) for j, v in total.items()}
    if not system.eval(assignment):
        raise InternalError("recombined assignment fails the source system")
    return Certificate("SOLVABLE", assignment=assignment)


@dataclass
class _CongruenceFailure:
    prime: int
    system: LinSystem
    witness_rows: dict


def _zmod_cached(m: int) -> FiniteRing:
    if not hasattr(_zmod_cached, "_registry"):
        _zmod_cached._registry = {}
    reg = _zmod_cached._registry
    if m not in reg:
        reg[m] = build_zmod(m)
    return reg[m]


def _solve_congruences(rows: list[tuple[object, int, dict, int]]):
    """Solve sum(c·x) = rhs (mod m_row) over the integers, row by row moduli.

    Returns (assignment var -> int, combined modulus) or a _CongruenceFailure
    naming the prime whose lifted chain system is unsolvable.
    """
    primes = sorted({p for _, m, _, _ in rows for p in _prime_factors(m)})
    assignment: dict = {}
    moduli: dict = {}
    for p in primes:
        p_rows = [(rid, _pval(m, p), coeffs, rhs) for rid, m, coeffs, rhs in rows if m % p == 0]
        cap = max(a for _, a, _, _ in p_rows)
        ring = _zmod_cached(p**cap)
        entries = {}
        b = {}
        cols: dict = {}
        for rid, a, coeffs, rhs in p_rows:
            lift = p ** (cap - a)
            for var, c in coeffs.items():
                cols[var] = True
                c_lift = (c * lift) % ring.size
                if c_lift:
                    entries[(rid, var)] = c_lift
            r_lift = (rhs * lift) % ring.size
            if r_lift:
                b[rid] = r_lift
        if not cols:
            # rows constrain no variable; keep a placeholder column
            cols[("free", p)] = True
        chain_sys = LinSystem(ring, [rid for rid, _, _, _ in p_rows], list(cols), entries, b)
        cert = solve_chain(chain_sys)
        if not cert.solvable:
            return _CongruenceFailure(
                prime=p,
                system=chain_sys,
                witness_rows=cert.witness.rows,
            )
        for var, elem in cert.assignment.items():
            assignment.setdefault(var, {})[p**cap] = elem.index
        moduli[p] = p**cap
    combined_mod = math.prod(moduli.values()) if moduli else 1
    out: dict = {}
    for var, residues in assignment.items():
        out[var] = _crt(residues)
    return out, combined_mod


def _prime_factors(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def _pval(m: int, p: int) -> int:
    a = 0
    while m % p == 0:
        m //= p
        a += 1
    return a


def _crt(residues: dict[int, int]) -> int:
    x, mod = 0, 1
    for m, r in sorted(residues.items()):
        g = math.gcd(mod, m)
        assert g == 1
        inv = pow(mod, -1, m)
        x = x + mod * ((r - x) * inv % m)
        mod *= m
    return x % mod


def _group_congruence_rows(system: GroupSystem):
    """Split a group system along the invariant-factor decomposition."""
    group = system.group
    if "cyclicdecomp" not in group._cache:
        group._cache["cyclicdecomp"] = group_decompose_cyclic(group)
    decomp = group._cache["cyclicdecomp"]
    rows = []
    for i in system.rows:
        b_coords = decomp.coords_of(system.rhs_idx(i))
        for t, (_, order) in enumerate(decomp.pairs):
            if order == 1:
                continue
            coeffs = {}
            for j in system.cols:
                c = system.entries.get((i, j))
                if c:
                    coeffs[(j, t)] = c % order
            rows.append(((i, t), order, coeffs, b_coords[t] % order))
    return decomp, rows


def solve_group(system: GroupSystem) -> Certificate:
    """Decide solvability over an abelian group via its cyclic decomposition."""
    decomp, rows = _group_congruence_rows(system)
    group = system.group
    if not rows:
        assignment = {j: group.identity for j in system.cols}
        return Certificate("SOLVABLE", assignment=assignment)
    result = _solve_congruences(rows)
    if isinstance(result, _CongruenceFailure):
        witness = UnsolvableWitness(
            summand=f"p={result.prime}",
            chain_spec=result.system.ring.spec,
            digest=result.system.digest(),
            rows=result.witness_rows,
        )
        return Certificate("UNSOLVABLE", witness=witness, reduced=result.system)
    values, _ = result
    assignment = {}
    for j in system.cols:
        coords = [values.get((j, t), 0) for t in range(len(decomp.pairs))]
        assignment[j] = group.element(decomp.element_of(coords))
    if not system.eval(assignment):
        raise InternalError("group assignment fails the source system")
    return Certificate("SOLVABLE", assignment=assignment)


def _numerical_congruence_rows(system: NumericalSystem):
    group = system.group
    if "cyclicdecomp" not in group._cache:
        group._cache["cyclicdecomp"] = group_decompose_cyclic(group)
    decomp = group._cache["cyclicdecomp"]
    rows = []
    for i in system.rows:
        b_coords = decomp.coords_of(system.rhs_idx(i))
        for t, (_, order) in enumerate(decomp.pairs):
            if order == 1:
                continue
            coeffs = {}
            for j in system.cols:
                a = system.entries.get((i, j))
                if a is not None:
                    c = decomp.coords_of(a)[t]
                    if c:
                        coeffs[j] = c
            rows.append(((i, t), order, coeffs, b_coords[t] % order))
    return decomp, rows


def solve_numerical(system: NumericalSystem) -> Certificate:
    """Solve an integer-variable system over a Z_d-module."""
    _, rows = _numerical_congruence_rows(system)
    if not rows:
        return Certificate("SOLVABLE", assignment={j: 0 for j in system.cols})
    result = _solve_congruences(rows)
    if isinstance(result, _CongruenceFailure):
        witness = UnsolvableWitness(
            summand=f"p={result.prime}",
            chain_spec=result.system.ring.spec,
            digest=result.system.digest(),
            rows=result.witness_rows,
        )
        return Certificate("UNSOLVABLE", witness=witness, reduced=result.system)
    values, _ = result
    assignment = {j: values.get(j, 0) for j in system.cols}
    if not system.eval(assignment):
        raise InternalError("numerical assignment fails the source system")
    return Certificate("SOLVABLE", assignment=assignment)


def solve_twosided(system: TwoSidedSystem) -> Certificate:
    """Decide a two-sided system by passing to its numerical form."""
    from . import reductions

    red = reductions.twosided_to_numerical(system)
    cert = solve_numerical(red.target)
    if not cert.solvable:
        return Certificate("UNSOLVABLE", witness=cert.witness, reduced=cert.reduced)
    assignment = red.backward(cert.assignment)
    if not system.eval(assignment):
        raise InternalError("mapped-back two-sided assignment fails the source system")
    return Certificate("SOLVABLE", assignment=assignment)


def solve(system) -> Certificate:
    """Dispatch to the solver matching the system type."""
    if isinstance(system, LinSystem):
        if system.ring.commutative:
            return solve_commutative(system)
        raise Unsupported("plain linear systems over non-commutative rings: use TwoSidedSystem")
    if isinstance(system, GroupSystem):
        return solve_group(system)
    if isinstance(system, TwoSidedSystem):
        return solve_twosided(system)
    if isinstance(system, NumericalSystem):
        return solve_numerical(system)
    raise InvalidParameter(f"cannot solve object of type {type(system).__name__}")


# ---------------------------------------------------------------------------
# certificate verification


def verify_certificate(system, cert: Certificate) -> bool:
    """Replay a certificate: evaluate a solution or re-run the reduction and
    check the witness identity on the reduced chain system."""
    if cert.verdict == "SOLVABLE":
        if cert.assignment is None:
            raise InvalidCertificate("solvable certificate without an assignment")
        if set(cert.assignment) != set(system.cols):
            raise InvalidCertificate("assignment variables do not match the system")
        try:
            return system.eval(cert.assignment)
        except InvalidParameter as exc:
            raise InvalidCertificate(str(exc))
    if cert.verdict != "UNSOLVABLE":
        raise InvalidCertificate(f"unknown verdict {cert.verdict!r}")
    if cert.witness is None:
        raise InvalidCertificate("unsolvable certificate without a witness")
    reduced = _replay_reduction(system, cert.witness)
    if reduced is None:
        return False
    if reduced.digest() != cert.witness.digest:
        return False
    # file-parsed witnesses carry stringified ids; match rows on str()
    by_str = {str(i): i for i in reduced.rows}
    if {str(i) for i in cert.witness.rows} != set(by_str):
        raise InvalidCertificate("witness rows do not match the reduced system")
    combo = {}
    for key, v in cert.witness.rows.items():
        idx = reduced.ring.parse_element(v).index if isinstance(v, str) else _norm_idx(v, reduced.ring)
        combo[by_str[str(key)]] = idx
    cd = chain_data(reduced.ring)
    tail = reduced.ring.pow_idx(cd.pi.index, cd.n - 1)
    try:
        _assert_witness(reduced, combo, tail)
    except InternalError:
        return False
    return True


def _replay_reduction(system, witness: UnsolvableWitness):
    from . import reductions

    if isinstance(system, LinSystem):
        if witness.summand == "chain":
            return system
        for summand in decompose_local(system.ring):
            if summand.e.name == witness.summand:
                sub = reductions.project_to_local(system, summand.e)
                order = default_order(summand.ring)
                return reductions.ring_to_cyclic(sub, order).target
        raise InvalidCertificate(f"no base idempotent named {witness.summand!r}")
    if isinstance(system, (GroupSystem, NumericalSystem, TwoSidedSystem)):
        if not witness.summand.startswith("p="):
            raise InvalidCertificate(f"malformed summand label {witness.summand!r}")
        prime = int(witness.summand[2:])
        if isinstance(system, GroupSystem):
            _, rows = _group_congruence_rows(system)
        elif isinstance(system, NumericalSystem):
            _, rows = _numerical_congruence_rows(system)
        else:
            red = reductions.twosided_to_numerical(system)
            _, rows = _numerical_congruence_rows(red.target)
        p_rows = [(rid, _pval(m, prime), coeffs, rhs) for rid, m, coeffs, rhs in rows if m % prime == 0]
        if not p_rows:
            raise InvalidCertificate(f"prime {prime} does not occur in the reduction")
        cap = max(a for _, a, _, _ in p_rows)
        ring = _zmod_cached(prime**cap)
        entries, b, cols = {}, {}, {}
        for rid, a, coeffs, rhs in p_rows:
            lift = prime ** (cap - a)
            for var, c in coeffs.items():
                cols[var] = True
                c_lift = (c * lift) % ring.size
                if c_lift:
                    entries[(rid, var)] = c_lift
            r_lift = (rhs * lift) % ring.size
            if r_lift:
                b[rid] = r_lift
        if not cols:
            cols[("free", prime)] = True
        return LinSystem(ring, [rid for rid, _, _, _ in p_rows], list(cols), entries, b)
    raise InvalidCertificate(f"cannot verify certificates for {type(system).__name__}")
