"""Hochschild cohomology of a finite-dimensional algebra, two ways.

The multiplication of the algebra is loaded as structure constants, turned
into a degree-2 element mu of the endomorphism model, and checked for
associativity via mu . mu = 0.  The coboundary is then computed both through
the composition calculus (delta_mu f = [f, mu] up to sign) and through the
classical cochain formula implemented by direct tensor contraction; the two
routes must produce the same kernel/image ranks and hence the same
cohomology dimensions.  The two coboundaries may differ by per-degree sign
normalizations, so raw matrices are never compared, only ranks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .calculus import delta, total
from .endomodel import EndoContext, HomElement
from .errors import FormatError, NonAssociativeError
from .ring import QQ, IntegersMod, Integers, Rationals, Ring, ring_from_token


@dataclass
class AlgebraSpec:
    """Structure constants c[k][i][j] of mu(e_i, e_j) = sum_k c[k][i][j] e_k."""

    dim: int
    ring: Ring
    c: list
    labels: list = field(default_factory=list)

    def __post_init__(self):
        d = self.dim
        if d < 1:
            raise FormatError("algebra dimension must be >= 1")
        if len(self.c) != d or any(
            len(plane) != d or any(len(row) != d for row in plane) for plane in self.c
        ):
            raise FormatError(f"structure constants must have shape {d}x{d}x{d}")
        if self.labels and len(self.labels) != d:
            raise FormatError("label count must match the dimension")

    @classmethod
    def from_json_obj(cls, obj: dict) -> "AlgebraSpec":
        try:
            dim = int(obj["dim"])
            ring = ring_from_token(obj["ring"])
            raw = obj["mu"]
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"malformed algebra spec: {exc}") from exc
        if not isinstance(raw, list):
            raise FormatError("mu must be a nested list of scalar strings")
        c = [[[ring.parse(str(entry)) for entry in row] for row in plane] for plane in raw]
        return cls(dim=dim, ring=ring, c=c, labels=list(obj.get("labels", [])))

    def to_json_obj(self) -> dict:
        fmt = self.ring.fmt
        obj = {
            "dim": self.dim,
            "ring": self.ring.token,
            "mu": [[[fmt(v) for v in row] for row in plane] for plane in self.c],
        }
        if self.labels:
            obj["labels"] = list(self.labels)
        return obj


def load_algebra(path: str) -> AlgebraSpec:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}") from exc
    if not isinstance(obj, dict):
        raise FormatError("algebra spec file must hold a JSON object")
    return AlgebraSpec.from_json_obj(obj)


def mu_from_spec(spec: AlgebraSpec, ctx: EndoContext | None = None) -> HomElement:
    """The multiplication as an arity-2 element: coeffs[k; i, j] = c[k][i][j]."""
    if ctx is None:
        ctx = EndoContext(spec.dim, spec.ring)
    elif ctx.d != spec.dim or ctx.ring != spec.ring:
        raise FormatError("context does not match the algebra spec")
    d = spec.dim
    coeffs = [spec.c[k][i][j] for k in range(d) for i in range(d) for j in range(d)]
    return HomElement(ctx, 2, coeffs)


def is_associative(mu: HomElement) -> bool:
    """True iff mu . mu = 0, which is equivalent to basis-triple associativity."""
    if mu.arity != 2:
        raise FormatError("expected an arity-2 element")
    return total(mu, mu).is_zero()


def associativity_witness(mu: HomElement):
    """First basis triple (i, j, k) with mu(mu(ei,ej),ek) != mu(ei,mu(ej,ek)).

    Computed by direct evaluation, independently of the composition calculus.
    Returns None when the multiplication is associative.
    """
    ctx = mu.ctx
    d = ctx.d
    ring = ctx.ring
    basis = [[ring.one if t == s else ring.zero for t in range(d)] for s in range(d)]
    for i in range(d):
        for j in range(d):
            ij = mu.eval([basis[i], basis[j]])
            for k in range(d):
                jk = mu.eval([basis[j], basis[k]])
                left = mu.eval([ij, basis[k]])
                right = mu.eval([basis[i], jk])
                if left != right:
                    return (i, j, k)
    return None


@dataclass
class CochainMatrix:
    """Dense exact matrix of a coboundary C^n -> C^(n+1) in the tensor basis."""

    source_arity: int
    ring: Ring
    rows: list  # d^(n+2) rows of length d^(n+1)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0]) if self.rows else 0


def _basis_cochain(ctx: EndoContext, arity: int, flat: int) -> HomElement:
    size = ctx.d ** (arity + 1)
    coeffs = [ctx.ring.zero] * size
    coeffs[flat] = ctx.ring.one
    return HomElement(ctx, arity, coeffs)


def delta_matrix(mu: HomElement, n: int, *, check_associative: bool = True) -> CochainMatrix:
    """Matrix of the comp-calculus coboundary on arity-n cochains."""
    if n < 0:
        raise FormatError("cochain arity must be >= 0")
    if check_associative and not is_associative(mu):
        raise NonAssociativeError("multiplication is not associative; coboundary does not square to zero")
    ctx = mu.ctx
    cols = []
    for flat in range(ctx.d ** (n + 1)):
        cols.append(delta(mu, _basis_cochain(ctx, n, flat)).coeffs)
    rows = [[col[r] for col in cols] for r in range(ctx.d ** (n + 2))]
    return CochainMatrix(source_arity=n, ring=ctx.ring, rows=rows)


def standard_delta(mu: HomElement, f: HomElement) -> HomElement:
    """Classical cochain coboundary, by direct contraction of the tensors.

    (delta f)(a_0..a_n) = a_0 f(a_1..a_n)
                          + sum_i (-1)^(i+1) f(a_0,..,a_i a_{i+1},..,a_n)
                          + (-1)^(n+1) f(a_0..a_{n-1}) a_n

    Deliberately shares no code with the composition-calculus route: it is
    the independent oracle the calculus is checked against.
    """
    if mu.arity != 2:
        raise FormatError("expected an arity-2 multiplication")
    ctx = f.ctx
    if mu.ctx != ctx:
        raise FormatError("mu and f from different contexts")
    d = ctx.d
    ring = ctx.ring
    n = f.arity
    add, mul = ring.add, ring.mul
    out_size = d ** (n + 2)
    out = [ring.zero] * out_size

    def tensor_index(ixs):
        off = 0
        for ix in ixs:
            off = off * d + ix
        return off

    def digits(flat, count):
        ds = []
        for _ in range(count):
            ds.append(flat % d)
            flat //= d
        ds.reverse()
        return ds

    for flat in range(out_size):
        ixs = digits(flat, n + 2)
        k, a = ixs[0], ixs[1:]
        acc = ring.zero
        # a_0 . f(a_1..a_n)
        for c in range(d):
            acc = add(acc, mul(mu[(k, a[0], c)], f[tuple([c] + a[1:])]))
        # inner multiplications
        for i in range(n):
            term = ring.zero
            for c in range(d):
                term = add(
                    term,
                    mul(f[tuple([k] + a[:i] + [c] + a[i + 2:])], mu[(c, a[i], a[i + 1])]),
                )
            acc = add(acc, term) if (i + 1) % 2 == 0 else add(acc, ring.neg(term))
        # f(a_0..a_{n-1}) . a_n
        term = ring.zero
        for c in range(d):
            term = add(term, mul(mu[(k, c, a[n])], f[tuple([c] + a[:n])]))
        acc = add(acc, term) if (n + 1) % 2 == 0 else add(acc, ring.neg(term))
        out[flat] = acc
    return HomElement(ctx, n + 1, out)


def standard_delta_matrix(mu: HomElement, n: int) -> CochainMatrix:
    ctx = mu.ctx
    cols = []
    for flat in range(ctx.d ** (n + 1)):
        cols.append(standard_delta(mu, _basis_cochain(ctx, n, flat)).coeffs)
    rows = [[col[r] for col in cols] for r in range(ctx.d ** (n + 2))]
    return CochainMatrix(source_arity=n, ring=ctx.ring, rows=rows)


def matrix_product(a: CochainMatrix, b: CochainMatrix) -> list:
    """Exact product a @ b as a list of rows (for the delta-squared check)."""
    ring = a.ring
    add, mul = ring.add, ring.mul
    if a.n_cols != b.n_rows:
        raise FormatError("matrix shapes do not compose")
    bt = list(zip(*b.rows)) if b.rows else []
    out = []
    for row in a.rows:
        out_row = []
        for col in bt:
            acc = ring.zero
            for x, y in zip(row, col):
                if not ring.is_zero(x) and not ring.is_zero(y):
                    acc = add(acc, mul(x, y))
            out_row.append(acc)
        out.append(out_row)
    return out


def matrix_rank(rows: list, ring: Ring) -> int:
    """Exact rank by Gaussian elimination.

    Over the rationals/integers, rows are first cleared to integers and a
    fraction-free (Bareiss-style) elimination is used; over Z/p a naive
    elimination with modular inverses suffices.
    """
    m = [list(r) for r in rows if any(not ring.is_zero(x) for x in r)]
    if not m:
        return 0
    if isinstance(ring, IntegersMod):
        return _rank_mod_p(m, ring.p)
    if isinstance(ring, (Rationals, Integers)):
        return _rank_bareiss(_clear_denominators(m))
    raise FormatError(f"rank computation not supported over {ring.token}")


def _clear_denominators(m: list) -> list:
    out = []
    for row in m:
        scale = 1
        for x in row:
            den = getattr(x, "denominator", 1)
            scale = scale * den // _gcd(scale, den)
        out.append([int(x * scale) for x in row])
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _rank_bareiss(m: list) -> int:
    n_rows, n_cols = len(m), len(m[0])
    rank = 0
    prev = 1
    row = 0
    for col in range(n_cols):
        pivot = None
        for r in range(row, n_rows):
            if m[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        for r in range(row + 1, n_rows):
            for c in range(col + 1, n_cols):
                m[r][c] = (m[row][col] * m[r][c] - m[r][col] * m[row][c]) // prev
            m[r][col] = 0
        prev = m[row][col]
        row += 1
        rank += 1
        if row == n_rows:
            break
    return rank


def _rank_mod_p(m: list, p: int) -> int:
    n_rows, n_cols = len(m), len(m[0])
    rank = 0
    row = 0
    for col in range(n_cols):
        pivot = None
        for r in range(row, n_rows):
            if m[r][col] % p:
                pivot = r
                break
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = pow(m[row][col], p - 2, p)
        m[row] = [(x * inv) % p for x in m[row]]
        for r in range(row + 1, n_rows):
            factor = m[r][col] % p
            if factor:
                m[r] = [(x - factor * y) % p for x, y in zip(m[r], m[row])]
        row += 1
        rank += 1
        if row == n_rows:
            break
    return rank


def _dims_from_matrices(matrices: list, d: int, n_max: int, ring: Ring) -> list:
    ranks = [matrix_rank(mat.rows, ring) for mat in matrices]
    dims = []
    for n in range(n_max + 1):
        dim_cn = d ** (n + 1)
        ker = dim_cn - ranks[n]
        img_prev = ranks[n - 1] if n >= 1 else 0
        dims.append(ker - img_prev)
    return dims


def cohomology_dims(spec: AlgebraSpec, n_max: int) -> list:
    """Cohomology dimensions H^0..H^n_max via the composition-calculus route."""
    if not isinstance(spec.ring, (Rationals, IntegersMod)):
        raise FormatError("cohomology needs a field: ring q or zmod:<p>")
    mu = mu_from_spec(spec)
    if not is_associative(mu):
        raise NonAssociativeError("cohomology requires an associative multiplication")
    mats = [delta_matrix(mu, n, check_associative=False) for n in range(n_max + 1)]
    return _dims_from_matrices(mats, spec.dim, n_max, spec.ring)


def cohomology_dims_standard(spec: AlgebraSpec, n_max: int) -> list:
    """The same dimensions via the independent classical-formula oracle."""
    if not isinstance(spec.ring, (Rationals, IntegersMod)):
        raise FormatError("cohomology needs a field: ring q or zmod:<p>")
    mu = mu_from_spec(spec)
    if associativity_witness(mu) is not None:
        raise NonAssociativeError("cohomology requires an associative multiplication")
    mats = [standard_delta_matrix(mu, n) for n in range(n_max + 1)]
    return _dims_from_matrices(mats, spec.dim, n_max, spec.ring)


def hochschild_report(spec: AlgebraSpec, n_max: int) -> dict:
    """Associativity verdict, dimensions by both routes, agreement flag.

    ``matrices_equal`` records the empirical observation of whether the two
    coboundary routes produce identical matrices (and not merely identical
    ranks); nothing in the contract assumes it.
    """
    mu = mu_from_spec(spec)
    witness = associativity_witness(mu)
    assoc = is_associative(mu)
    report = {
        "dim": spec.dim,
        "ring": spec.ring.token,
        "associative": assoc,
        "witness": list(witness) if witness is not None else None,
        "dims": None,
        "dims_oracle": None,
        "oracle_agree": None,
        "matrices_equal": None,
    }
    if assoc:
        report["dims"] = cohomology_dims(spec, n_max)
        report["dims_oracle"] = cohomology_dims_standard(spec, n_max)
        report["oracle_agree"] = report["dims"] == report["dims_oracle"]
        report["matrices_equal"] = all(
            delta_matrix(mu, n, check_associative=False).rows
            == standard_delta_matrix(mu, n).rows
            for n in range(n_max + 1)
        )
    return report


# -- built-in algebra specs ----------------------------------------------------


def ground_field(ring: Ring = QQ) -> AlgebraSpec:
    """The ring itself as a one-dimensional algebra."""
    return AlgebraSpec(dim=1, ring=ring, c=[[[ring.one]]], labels=["e"])


def product_of_fields(ring: Ring = QQ) -> AlgebraSpec:
    """K x K with idempotent basis: e_i e_j = delta_ij e_i."""
    z, o = ring.zero, ring.one
    c = [[[o, z], [z, z]], [[z, z], [z, o]]]
    return AlgebraSpec(dim=2, ring=ring, c=c, labels=["e0", "e1"])


def dual_numbers(ring: Ring = QQ) -> AlgebraSpec:
    """K[x]/(x^2) with basis 1, x."""
    z, o = ring.zero, ring.one
    # mu(e_i, e_j): 1*1=1, 1*x=x, x*1=x, x*x=0
    c = [
        [[o, z], [z, z]],  # coefficient of 1
        [[z, o], [o, z]],  # coefficient of x
    ]
    return AlgebraSpec(dim=2, ring=ring, c=c, labels=["1", "x"])


def builtin_algebra(name: str, ring: Ring = QQ) -> AlgebraSpec:
    table = {
        "ground": ground_field,
        "product": product_of_fields,
        "dual": dual_numbers,
    }
    if name not in table:
        raise FormatError(f"unknown builtin algebra {name!r}; choose from {sorted(table)}")
    return table[name](ring)
