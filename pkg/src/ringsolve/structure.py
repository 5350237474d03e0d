"""Structure theory of finite commutative rings.

Locality, the idempotent base, local decomposition, chain-ring data,
Teichmueller sets, canonical total orders on k-generated local rings, and
the explicit Galois-ring representation.  All results are memoised on the
ring object; rings are immutable so the caches are sound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import InternalError, InvalidParameter, PreconditionViolation, Unsupported
from .ring import (
    FiniteRing,
    Poly,
    RingElement,
    build_table_ring,
    idempotents,
    nilpotency,
    poly_mod_reduce,
    unit_indices,
)


def _require_commutative(ring: FiniteRing, what: str):
    if not ring.commutative:
        raise Unsupported(f"{what} requires a commutative ring")


def is_local(ring: FiniteRing) -> bool:
    """A finite commutative ring is local iff its only idempotents are 0 and 1."""
    _require_commutative(ring, "is_local")
    idem = {e.index for e in idempotents(ring)}
    return idem == {ring.zero.index, ring.one.index}


def base(ring: FiniteRing) -> set[RingElement]:
    """The unique orthogonal idempotent set splitting R into local summands.

    These are the non-trivial idempotents not expressible as a sum of two
    orthogonal non-trivial idempotents; for a local ring the base is {1}.
    """
    _require_commutative(ring, "base")
    if "base" not in ring._cache:
        if is_local(ring):
            found = frozenset({ring.one.index})
        else:
            trivial = {ring.zero.index, ring.one.index}
            cand = [e.index for e in idempotents(ring) if e.index not in trivial]
            found = frozenset(
                e for e in cand
                if not any(
                    ring.mul_idx(x, y) == ring.zero.index and ring.add_idx(x, y) == e
                    for x in cand for y in cand
                )
            )
        ring._cache["base"] = found
    return {ring.element(i) for i in ring._cache["base"]}


@dataclass
class LocalSummand:
    """One local summand eR of a decomposition, with its transfer maps."""

    e: RingElement
    ring: FiniteRing
    embed: Callable[[int], int]    # summand index -> R index
    project: Callable[[int], int]  # R index -> summand index


def decompose_local(ring: FiniteRing) -> list[LocalSummand]:
    """R as a direct sum of local rings eR over the base idempotents."""
    _require_commutative(ring, "decompose_local")
    if "summands" in ring._cache:
        return ring._cache["summands"]
    base_set = sorted(e.index for e in base(ring))
    summands = []
    if base_set == [ring.one.index]:
        identity = lambda i: i
        summands.append(LocalSummand(ring.one, ring, identity, identity))
    else:
        for e in base_set:
            members = sorted({ring.mul_idx(e, r) for r in range(ring.size)})
            pos = {r: k for k, r in enumerate(members)}
            add = [[pos[ring.add_idx(x, y)] for y in members] for x in members]
            mul = [[pos[ring.mul_idx(x, y)] for y in members] for x in members]
            sub = build_table_ring(
                add,
                mul,
                commutative=True,
                names=[ring.format_element(r) for r in members],
                spec=f"local({ring.spec},{ring.format_element(e)})",
                _validate=False,
            )
            members_tuple = tuple(members)
            summands.append(
                LocalSummand(
                    e=ring.element(e),
                    ring=sub,
                    embed=lambda i, m=members_tuple: m[i],
                    project=lambda r, p=pos, rr=ring, ee=e: p[rr.mul_idx(ee, r)],
                )
            )
    ring._cache["summands"] = summands
    return summands


def maximal_ideal(ring: FiniteRing) -> frozenset[int]:
    """Non-units of a local ring (indices)."""
    if not is_local(ring):
        raise PreconditionViolation(f"{ring.spec} is not local")
    if "maxideal" not in ring._cache:
        all_idx = frozenset(range(ring.size))
        ring._cache["maxideal"] = all_idx - unit_indices(ring)
    return ring._cache["maxideal"]


def residue_field_size(ring: FiniteRing) -> int:
    return ring.size // len(maximal_ideal(ring))


@dataclass
class LocalData:
    """Residue-field data of a local ring."""

    maximal_ideal: frozenset[int]
    q: int
    field: FiniteRing
    projection: list[int]  # R index -> field index


def local_data(ring: FiniteRing) -> LocalData:
    """Residue field R/m as a table ring with the coset projection map."""
    if "localdata" in ring._cache:
        return ring._cache["localdata"]
    m = maximal_ideal(ring)
    # cosets are labelled by their least member
    coset_of = {}
    reps = []
    for r in range(ring.size):
        if r in coset_of:
            continue
        members = sorted(ring.add_idx(r, x) for x in m)
        label = members[0]
        reps.append(label)
        for v in members:
            coset_of[v] = label
    reps.sort()
    pos = {rep: k for k, rep in enumerate(reps)}
    add = [[pos[coset_of[ring.add_idx(x, y)]] for y in reps] for x in reps]
    mul = [[pos[coset_of[ring.mul_idx(x, y)]] for y in reps] for x in reps]
    field = build_table_ring(
        add,
        mul,
        commutative=True,
        names=[ring.format_element(r) + "+m" for r in reps],
        spec=f"residue({ring.spec})",
        _validate=False,
    )
    projection = [pos[coset_of[r]] for r in range(ring.size)]
    data = LocalData(maximal_ideal=m, q=len(reps), field=field, projection=projection)
    ring._cache["localdata"] = data
    return data


def ideal_generated(ring: FiniteRing, gens: Sequence[int]) -> frozenset[int]:
    """The ideal sum(g*R) over the generators, as an index set."""
    out = {ring.zero.index}
    for g in gens:
        multiples = {ring.mul_idx(g, r) for r in range(ring.size)}
        out = {ring.add_idx(a, b) for a in out for b in multiples}
    return frozenset(out)


@dataclass
class ChainData:
    """Chain-ring parameters: m = pi*R, pi^n = 0, residue field of size q."""

    pi: RingElement
    n: int
    q: int


def chain_data(ring: FiniteRing) -> ChainData | None:
    """Present iff the ring is local with a principal maximal ideal.

    Fields use pi = 0 with nilpotency 1, so pi^(n-1) = 0^0 = 1 and the
    generic witness tail (0,...,0,pi^(n-1)) degenerates to (0,...,0,1).
    """
    _require_commutative(ring, "chain_data")
    if "chaindata" in ring._cache:
        return ring._cache["chaindata"]
    result = None
    if is_local(ring):
        m = maximal_ideal(ring)
        q = ring.size // len(m)
        if m == {ring.zero.index}:
            result = ChainData(pi=ring.zero, n=1, q=q)
        else:
            for pi in sorted(m):
                if ideal_generated(ring, [pi]) == m:
                    n = nilpotency(ring, ring.element(pi))
                    if n is None:
                        raise InternalError("maximal-ideal generator is not nilpotent")
                    result = ChainData(pi=ring.element(pi), n=n, q=q)
                    break
    ring._cache["chaindata"] = result
    return result


def minimal_generators_maximal_ideal(ring: FiniteRing) -> tuple[RingElement, ...]:
    """Lexicographically first minimal generating tuple of m, smallest k first."""
    if not is_local(ring):
        raise PreconditionViolation(f"{ring.spec} is not local")
    if "mingens" in ring._cache:
        return ring._cache["mingens"]
    m = maximal_ideal(ring)
    result = None
    if m == {ring.zero.index}:
        result = ()
    else:
        members = sorted(m)
        for k in range(1, len(members) + 1):
            for combo in itertools.combinations(members, k):
                if ideal_generated(ring, combo) == m:
                    result = tuple(ring.element(i) for i in combo)
                    break
            if result is not None:
                break
    if result is None:
        raise InternalError("maximal ideal admits no generating set")
    ring._cache["mingens"] = result
    return result


def teichmuller_set(ring: FiniteRing) -> set[RingElement]:
    """Gamma(R) = { r : r^q = r }, a section of the residue field."""
    if not is_local(ring):
        raise PreconditionViolation(f"{ring.spec} is not local")
    q = residue_field_size(ring)
    return {ring.element(r) for r in range(ring.size) if ring.pow_idx(r, q) == r}


# ---------------------------------------------------------------------------
# canonical order


@dataclass
class RingOrder:
    """A strict total order on a ring's elements with canonical representations.

    ``key(i)`` is a sort key (tuple of Gamma positions, one per exponent
    tuple of the generators); ``rep(i)`` maps an element to its canonical
    coefficient list [(exponent tuple, Gamma element index), ...].
    """

    ring: FiniteRing
    params: tuple[RingElement, tuple[RingElement, ...]] | None
    sorted_elements: list[int]
    _keys: list[tuple]
    _reps: list[list[tuple[tuple[int, ...], int]]] | None

    def key(self, i: int) -> tuple:
        return self._keys[i]

    def less(self, a: int, b: int) -> bool:
        return self._keys[a] < self._keys[b]

    def rep(self, i: int) -> list[tuple[tuple[int, ...], int]]:
        if self._reps is None:
            raise Unsupported("this order carries no canonical representations")
        return self._reps[i]

    def rank(self, i: int) -> int:
        return self.sorted_elements.index(i)


def table_order(ring: FiniteRing) -> RingOrder:
    """The trivial order by element table index."""
    return RingOrder(
        ring=ring,
        params=None,
        sorted_elements=list(range(ring.size)),
        _keys=[(i,) for i in range(ring.size)],
        _reps=None,
    )


def _gamma_order(ring: FiniteRing, alpha_idx: int) -> list[int]:
    """Gamma(R) listed as [0, g(alpha^0), g(alpha^1), ...] via residue powers."""
    data = local_data(ring)
    field = data.field
    q = data.q
    gamma = sorted(r for r in range(ring.size) if ring.pow_idx(r, q) == r)
    by_residue = {}
    for r in gamma:
        res = data.projection[r]
        if res in by_residue:
            raise InternalError("Teichmuller section is not injective on residues")
        by_residue[res] = r
    abar = data.projection[alpha_idx]
    order = [by_residue[field.zero.index]]
    acc = field.one.index
    for _ in range(q - 1):
        order.append(by_residue[acc])
        acc = field.mul_idx(acc, abar)
    if len(set(order)) != q:
        raise InvalidParameter("alpha does not project to a primitive residue")
    return order


def _is_primitive_residue(data: LocalData, residue_idx: int) -> bool:
    field = data.field
    if residue_idx == field.zero.index:
        return False
    acc = residue_idx
    order = 1
    while acc != field.one.index:
        acc = field.mul_idx(acc, residue_idx)
        order += 1
    return order == data.q - 1


def canonical_order(ring: FiniteRing, alpha: RingElement, pis: Sequence[RingElement]) -> RingOrder:
    """The total order induced by canonical polynomial expressions.

    Every element is written uniquely as a Gamma-combination of monomials
    pi_1^{i_1}...pi_k^{i_k} (exponents below each nilpotency, tuples in lex
    order), via the greedy recursion that picks, at each exponent tuple, the
    least Gamma coefficient whose subtraction lands in the ideal spanned by
    the later monomials.  Elements are compared by their coefficient words,
    with Gamma ordered 0 < alpha^0 < alpha^1 < ...
    """
    if not is_local(ring):
        raise PreconditionViolation(f"{ring.spec} is not local")
    data = local_data(ring)
    if not _is_primitive_residue(data, data.projection[alpha.index]):
        raise InvalidParameter("alpha must project to a primitive residue element")
    m = maximal_ideal(ring)
    pi_idx = [p.index for p in pis]
    if ideal_generated(ring, pi_idx) != m:
        raise InvalidParameter("the pi tuple must generate the maximal ideal")
    gamma = _gamma_order(ring, alpha.index)
    gamma_pos = {g: k for k, g in enumerate(gamma)}
    nilps = [nilpotency(ring, p) for p in pis]
    if any(n is None for n in nilps):
        raise InvalidParameter("maximal-ideal generators must be nilpotent")
    tuples = list(itertools.product(*(range(n) for n in nilps))) or [()]
    tuples.sort()
    monomial = {}
    for t in tuples:
        acc = ring.one.index
        for p, exp in zip(pi_idx, t):
            acc = ring.mul_idx(acc, ring.pow_idx(p, exp))
        monomial[t] = acc
    # tail_span[t] = additive span of { M(t')*r : t' > t, r in R }
    tail_span: dict[tuple, frozenset[int]] = {}
    span: set[int] = {ring.zero.index}
    for t in reversed(tuples):
        tail_span[t] = frozenset(span)
        gens = {ring.mul_idx(monomial[t], r) for r in range(ring.size)}
        span = _additive_closure(ring, span | gens)
    reps: list[list[tuple[tuple[int, ...], int]]] = []
    keys: list[tuple] = []
    for r in range(ring.size):
        s = r
        rep = []
        word = []
        for t in tuples:
            mono = monomial[t]
            allowed = tail_span[t]
            chosen = None
            for pos, a in enumerate(gamma):
                diff = ring.sub_idx(s, ring.mul_idx(a, mono))
                if diff in allowed:
                    chosen = (pos, a, diff)
                    break
            if chosen is None:
                raise InternalError(f"no canonical coefficient at {t} for element {r}")
            pos, a, diff = chosen
            word.append(pos)
            if a != ring.zero.index:
                rep.append((t, a))
            s = diff
        if s != ring.zero.index:
            raise InternalError("canonical representation did not terminate at zero")
        reps.append(rep)
        keys.append(tuple(word))
    if len(set(keys)) != ring.size:
        raise InternalError("canonical keys are not distinct")
    order = sorted(range(ring.size), key=lambda i: keys[i])
    return RingOrder(
        ring=ring,
        params=(alpha, tuple(pis)),
        sorted_elements=order,
        _keys=keys,
        _reps=reps,
    )


def _additive_closure(ring: FiniteRing, seed: set[int]) -> set[int]:
    span = set(seed)
    frontier = list(span)
    while frontier:
        x = frontier.pop()
        for y in list(span):
            s = ring.add_idx(x, y)
            if s not in span:
                span.add(s)
                frontier.append(s)
    return span


def canonical_params(ring: FiniteRing) -> tuple[RingElement, tuple[RingElement, ...]]:
    """Deterministic default parameters for canonical_order.

    alpha: the first element in table order projecting to a primitive
    residue; pi: the lexicographically first minimal generating tuple of m.
    """
    if not is_local(ring):
        raise PreconditionViolation(f"{ring.spec} is not local")
    if "canonparams" in ring._cache:
        return ring._cache["canonparams"]
    data = local_data(ring)
    alpha = None
    for r in range(ring.size):
        if _is_primitive_residue(data, data.projection[r]):
            alpha = ring.element(r)
            break
    if alpha is None:
        raise InternalError("no element projects to a primitive residue")
    params = (alpha, minimal_generators_maximal_ideal(ring))
    ring._cache["canonparams"] = params
    return params


def default_order(ring: FiniteRing) -> RingOrder:
    """canonical_order at canonical_params, memoised."""
    if "canonorder" not in ring._cache:
        alpha, pis = canonical_params(ring)
        ring._cache["canonorder"] = canonical_order(ring, alpha, pis)
    return ring._cache["canonorder"]


# ---------------------------------------------------------------------------
# Galois rings


def is_galois_ring(ring: FiniteRing) -> tuple[int, int, int] | None:
    """(p, n, r) iff the ring is local with maximal ideal p*R; else None."""
    _require_commutative(ring, "is_galois_ring")
    if "galois_pnr" in ring._cache:
        return ring._cache["galois_pnr"]
    result = None
    if is_local(ring):
        char = ring.characteristic()
        p = _least_prime_factor(char)
        n = _exact_log(char, p)
        if n is not None:
            m = maximal_ideal(ring)
            p_elem = ring.from_int(p).index
            p_ideal = frozenset(ring.mul_idx(p_elem, r) for r in range(ring.size))
            if p_ideal == m:
                size_log = _exact_log(ring.size, p)
                if size_log is not None and size_log % n == 0:
                    result = (p, n, size_log // n)
    ring._cache["galois_pnr"] = result
    return result


def _least_prime_factor(v: int) -> int:
    d = 2
    while d * d <= v:
        if v % d == 0:
            return d
        d += 1
    return v


def _exact_log(v: int, p: int) -> int | None:
    n = 0
    while v % p == 0:
        v //= p
        n += 1
    return n if v == 1 else None


@dataclass
class GaloisRep:
    """The explicit isomorphism R = Z_{p^n}[X]/(f(X)).

    ``g`` is the minimal polynomial over Z_p of the primitive residue
    alpha-bar; ``f`` lifts g coefficientwise by b_i = p^n - p + a_i;
    ``beta`` is a root of f in R and ``iota`` maps each element to the
    unique coefficient tuple h with h(beta) = a.
    """

    p: int
    n: int
    r: int
    f: Poly
    g: Poly
    alpha: RingElement
    beta: RingElement
    iota: dict[int, tuple[int, ...]]
    iota_inv: dict[tuple[int, ...], int]

    @property
    def q(self) -> int:
        return self.p**self.n

    def to_poly(self, elem: RingElement) -> tuple[int, ...]:
        return self.iota[elem.index]

    def from_poly(self, coeffs: Sequence[int]) -> RingElement:
        key = tuple(c % self.q for c in coeffs)
        return RingElement(self.alpha.ring, self.iota_inv[key])


def _minpoly_over_prime(field: FiniteRing, p: int, alpha_idx: int, r: int) -> Poly:
    """Monic degree-r polynomial over Z_p vanishing at alpha in the residue field."""
    powers = [field.one.index]
    for _ in range(r):
        powers.append(field.mul_idx(powers[-1], alpha_idx))
    # find c_0..c_{r-1} over Z_p with sum(c_t * alpha^t) = alpha^r
    for combo in itertools.product(range(p), repeat=r):
        acc = field.zero.index
        for c, pw in zip(combo, powers):
            acc = field.add_idx(acc, field.scalar_idx(c, pw))
        if acc == powers[r]:
            coeffs = [(-c) % p for c in combo] + [1]
            return Poly(tuple(coeffs))
    raise InternalError("primitive residue has no degree-r minimal polynomial")


def galois_representation(ring: FiniteRing) -> GaloisRep:
    """Compute the GaloisRep of a Galois ring; exhaustive root/coefficient search."""
    pnr = is_galois_ring(ring)
    if pnr is None:
        raise PreconditionViolation(f"{ring.spec} is not a Galois ring")
    if "galoisrep" in ring._cache:
        return ring._cache["galoisrep"]
    p, n, r = pnr
    q = p**n
    data = local_data(ring)
    alpha, _ = canonical_params(ring)
    g = _minpoly_over_prime(data.field, p, data.projection[alpha.index], r)
    f_coeffs = [(q - p + a) % q for a in g.coeffs[:-1]] + [1]
    f = Poly(tuple(f_coeffs))
    beta_idx = None
    for b in range(ring.size):
        acc = ring.zero.index
        for t, c in enumerate(f.coeffs):
            acc = ring.add_idx(acc, ring.scalar_idx(c, ring.pow_idx(b, t)))
        if acc == ring.zero.index:
            beta_idx = b
            break
    if beta_idx is None:
        raise InternalError(f"the Galois polynomial {f} has no root in {ring.spec}")
    beta = ring.element(beta_idx)
    beta_powers = [ring.one.index]
    for _ in range(r - 1):
        beta_powers.append(ring.mul_idx(beta_powers[-1], beta_idx))
    iota: dict[int, tuple[int, ...]] = {}
    iota_inv: dict[tuple[int, ...], int] = {}
    for combo in itertools.product(range(q), repeat=r):
        acc = ring.zero.index
        for c, pw in zip(combo, beta_powers):
            acc = ring.add_idx(acc, ring.scalar_idx(c, pw))
        if acc in iota:
            raise InternalError("beta powers do not form a basis")
        iota[acc] = combo
        iota_inv[combo] = acc
    if len(iota) != ring.size:
        raise InternalError("iota is not a bijection")
    rep = GaloisRep(
        p=p, n=n, r=r, f=f, g=g, alpha=alpha, beta=beta, iota=iota, iota_inv=iota_inv
    )
    ring._cache["galoisrep"] = rep
    return rep


def galois_mul_polys(rep: GaloisRep, a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Multiply coefficient tuples mod (f, p^n); helper for isomorphism tests."""
    prod = [0] * (2 * rep.r - 1)
    for s, x in enumerate(a):
        for t, y in enumerate(b):
            prod[s + t] += x * y
    return poly_mod_reduce(prod, rep.f.coeffs, rep.q)
