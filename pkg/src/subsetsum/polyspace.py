"""Low-space evaluation of the randomized solver as an arithmetic circuit.

The solver's run (for one fixed draw of all partitions) is a DAG whose
leaves are singleton vectors e_z and whose inner nodes either add vectors
pointwise (set union) or convolve them (sumset). Dropping the intermediate
caps only enlarges the represented set, and never beyond the true subset
sums, so out(C)[s] > 0 still certifies s attainable.

Evaluating one output entry never materializes a full vector: pick a prime
p ≡ 1 (mod tau) with a primitive tau-th root of unity, evaluate the
transformed circuit (singletons become scalars omega^(jk)·v, convolutions
become products) once per transform index j, and invert the transform as a
plain sum. Storage is proportional to the circuit size, not to tau.
"""

from __future__ import annotations

import math
import secrets
from dataclasses import dataclass, replace

import numpy as np

from .core import LayerParams, Rng, color_coding_rounds, random_partition, sparse_partition, split_layers
from .preprocess import Instance, reduce_multiplicities, split_two_sets

GATE_CONST = 0  # singleton constant: value v at index k
GATE_ADD = 1  # pointwise addition of two child vectors
GATE_CONV = 2  # convolution of two child vectors

_BLOCK = 128  # transform indices evaluated per vectorized pass
_WORD_LIMIT = 1 << 63
_U64_PRIME_LIMIT = 1 << 32  # products of two residues must fit in uint64

# Deterministic Miller-Rabin base set for every modulus below 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin primality test; deterministic for n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d = n - 1
    r = (d & -d).bit_length() - 1
    d >>= r
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def find_prime(tau: int, pool_size: int, rng: Rng | None = None) -> int:
    """Uniform draw from the first pool_size primes in the progression 1 + k*tau.

    Scanning k = 1, 2, ... keeps the pool reproducible; the draw itself uses
    rng (fresh OS entropy when omitted). Fails only if the word-size bound
    is exhausted before the pool fills.
    """
    if tau < 2 or tau & (tau - 1):
        raise ValueError("tau must be a power of two >= 2")
    if pool_size < 1:
        raise ValueError("pool_size must be >= 1")
    pool = []
    cand = 1 + tau
    while len(pool) < pool_size:
        if cand >= _WORD_LIMIT:
            raise RuntimeError(
                f"exhausted the word-size range collecting {pool_size} primes "
                f"for tau={tau}"
            )
        if is_probable_prime(cand):
            pool.append(cand)
        cand += tau
    if pool_size == 1:
        return pool[0]
    if rng is None:
        rng = Rng(secrets.randbits(63))
    return pool[rng.randrange(len(pool))]


def find_root_of_unity(p: int, tau: int, rng: Rng, max_iters: int = 256) -> int:
    """Primitive tau-th root of unity in Z_p, by random sampling.

    omega = a^((p-1)/tau) for uniform a in Z_p^*, retried until
    omega^tau = 1 and omega^(tau/2) != 1. Each draw succeeds with
    probability >= 1/2 (tau is a power of two), so the iteration cap is
    reached with probability <= 2^-max_iters.
    """
    if tau < 2 or tau & (tau - 1):
        raise ValueError("tau must be a power of two >= 2")
    if (p - 1) % tau:
        raise ValueError("tau must divide p-1")
    exp = (p - 1) // tau
    for _ in range(max_iters):
        a = 1 + rng.randrange(p - 1)
        w = pow(a, exp, p)
        if pow(w, tau, p) == 1 and pow(w, tau // 2, p) != 1:
            return w
    raise RuntimeError("root-of-unity search exceeded its iteration cap")


@dataclass(frozen=True)
class FieldParams:
    """Prime field and transform size: p ≡ 1 (mod tau), omega of order tau."""

    p: int
    tau: int
    omega: int
    omega_inv: int
    tau_inv: int

    @classmethod
    def create(cls, p: int, tau: int, omega: int) -> "FieldParams":
        if tau < 2 or tau & (tau - 1):
            raise ValueError("tau must be a power of two >= 2")
        if (p - 1) % tau:
            raise ValueError("tau must divide p-1")
        if pow(omega, tau, p) != 1 or pow(omega, tau // 2, p) == 1:
            raise ValueError("omega is not a primitive tau-th root of unity")
        return cls(p, tau, omega, pow(omega, p - 2, p), pow(tau, p - 2, p))

    @classmethod
    def generate(cls, tau: int, pool_size: int, rng: Rng) -> "FieldParams":
        p = find_prime(tau, pool_size, rng)
        omega = find_root_of_unity(p, tau, rng)
        return cls.create(p, tau, omega)


@dataclass(frozen=True)
class Gate:
    """One circuit node.

    op GATE_CONST: a is the singleton index k, b the value v.
    op GATE_ADD / GATE_CONV: a and b are child gate ids.
    len_bound tracks the largest possibly-nonzero index: children's max for
    adds, children's sum for convolutions, k for singletons. Over the
    natural numbers these rules are exact, so the bound certifies that no
    convolution wraps.
    """

    op: int
    a: int
    b: int
    len_bound: int


@dataclass(frozen=True)
class Circuit:
    """Gate DAG in topological order, evaluated over length-vec_len vectors."""

    gates: tuple[Gate, ...]
    output: int
    vec_len: int
    meta: tuple  # (n, t, seed)

    @property
    def size(self) -> int:
        return len(self.gates)

    @property
    def length_bound(self) -> int:
        return self.gates[self.output].len_bound

    def with_vec_len(self, tau: int) -> "Circuit":
        """Same circuit padded to a larger power-of-two vector length."""
        if tau & (tau - 1) or tau <= max(g.len_bound for g in self.gates):
            raise ValueError("vec_len must be a power of two above every length bound")
        return replace(self, vec_len=tau)

    def validate(self) -> None:
        """Structural checks: topological order, arities, bounds, no overflow."""
        if self.vec_len < 2 or self.vec_len & (self.vec_len - 1):
            raise ValueError("vec_len must be a power of two >= 2")
        for i, g in enumerate(self.gates):
            if g.op == GATE_CONST:
                if not (0 <= g.a < self.vec_len):
                    raise ValueError(f"gate {i}: singleton index out of range")
                if g.len_bound != g.a:
                    raise ValueError(f"gate {i}: singleton length bound mismatch")
            elif g.op in (GATE_ADD, GATE_CONV):
                if not (0 <= g.a < i and 0 <= g.b < i):
                    raise ValueError(f"gate {i}: children must precede the gate")
                ba, bb = self.gates[g.a].len_bound, self.gates[g.b].len_bound
                want = max(ba, bb) if g.op == GATE_ADD else ba + bb
                if g.len_bound != want:
                    raise ValueError(f"gate {i}: length bound mismatch")
                if g.op == GATE_CONV and g.len_bound >= self.vec_len:
                    raise ValueError(f"gate {i}: convolution overflows vec_len")
            else:
                raise ValueError(f"gate {i}: unknown op {g.op}")
        if not (0 <= self.output < len(self.gates)):
            raise ValueError("output gate id out of range")


class CircuitBuilder:
    """Accumulates gates in topological order."""

    def __init__(self):
        self.gates: list[Gate] = []
        self._zero_id: int | None = None

    def singleton(self, k: int, v: int = 1) -> int:
        self.gates.append(Gate(GATE_CONST, k, v, k))
        return len(self.gates) - 1

    def e_zero(self) -> int:
        # shared identity leaf: the vector with a single 1 at index 0
        if self._zero_id is None:
            self._zero_id = self.singleton(0, 1)
        return self._zero_id

    def add(self, i: int, j: int) -> int:
        bound = max(self.gates[i].len_bound, self.gates[j].len_bound)
        self.gates.append(Gate(GATE_ADD, i, j, bound))
        return len(self.gates) - 1

    def conv(self, i: int, j: int) -> int:
        bound = self.gates[i].len_bound + self.gates[j].len_bound
        self.gates.append(Gate(GATE_CONV, i, j, bound))
        return len(self.gates) - 1

    def subset_gate(self, items) -> int:
        """Vector representing {0} ∪ items: an add-tree of singletons.

        Index 0 is included so that convolving group gates composes sums
        that may skip a group entirely, matching the sumset's semantics.
        """
        gate = self.e_zero()
        for z in items:
            gate = self.add(gate, self.singleton(z))
        return gate

    def conv_fold(self, ids: list[int]) -> int:
        if not ids:
            return self.e_zero()
        out = ids[0]
        for g in ids[1:]:
            out = self.conv(out, g)
        return out

    def add_fold(self, ids: list[int]) -> int:
        if not ids:
            return self.e_zero()
        out = ids[0]
        for g in ids[1:]:
            out = self.add(out, g)
        return out


def _circuit_color_coding(b: CircuitBuilder, items, k: int, delta: float, rng: Rng) -> int:
    bins = k * k
    reps = []
    for _ in range(color_coding_rounds(delta)):
        groups = sparse_partition(items, bins, rng)
        leaves = [b.subset_gate(g) for g in groups]
        reps.append(b.conv_fold(leaves))
    return b.add_fold(reps)


def _circuit_layer(b: CircuitBuilder, items, t: int, ell: int, delta: float, rng: Rng) -> int:
    if ell < math.log2(ell / delta):
        return _circuit_color_coding(b, items, ell, delta, rng)
    params = LayerParams.compute(ell, delta)
    groups = random_partition(items, params.m, rng)
    level = [
        _circuit_color_coding(b, g, params.gamma, delta / ell, rng) for g in groups
    ]
    while len(level) > 1:
        level = [b.conv(level[2 * j], level[2 * j + 1]) for j in range(len(level) // 2)]
    return level[0]


def _circuit_subset_sum(b: CircuitBuilder, items, t: int, delta: float, rng: Rng) -> int:
    if not items:
        return b.e_zero()
    layer_gates = []
    for ell, layer_items in split_layers(items, t, len(items)):
        if layer_items:
            layer_gates.append(_circuit_layer(b, layer_items, t, ell, delta, rng))
    return b.conv_fold(layer_gates)


def _tau_for_bound(bound: int) -> int:
    # smallest power of two strictly above the tracked length bound
    return max(2, 1 << max(1, bound).bit_length())


def build_circuit(zs, t: int, seed: int) -> Circuit:
    """One random draw of the solver's partition tree, as a circuit.

    Leaves are add-trees of singletons per drawn group; unions become adds,
    capped sumsets become (uncapped) convolutions, so the represented set
    may be a superset of the solver's output but never contains an
    unattainable sum. vec_len is the power of two strictly above the
    tracked worst-case length bound, hence no convolution gate overflows.
    """
    items = sorted({int(z) for z in zs})
    if items and items[0] < 1:
        raise ValueError("items must be positive")
    n = len(items)
    b = CircuitBuilder()
    if n == 0:
        out = b.e_zero()
    else:
        delta = min(0.25, 1.0 / n)
        out = _circuit_subset_sum(b, items, t, delta, Rng(seed))
    bound = b.gates[out].len_bound
    return Circuit(tuple(b.gates), out, _tau_for_bound(bound), (n, t, seed))


class SpaceMeter:
    """Tracks the peak number of simultaneously live field elements."""

    def __init__(self):
        self.peak = 0

    def record(self, n: int) -> None:
        if n > self.peak:
            self.peak = n


def dft_entry_evaluate(circuit: Circuit, fp: FieldParams, j: int) -> int:
    """Entry j of the transformed output, via the scalar circuit.

    Singleton (k, v) evaluates to omega^(jk)*v, adds to +, convolutions
    to *, everything mod p. O(size) field operations and storage.
    """
    if not (0 <= j < fp.tau):
        raise ValueError("j out of range")
    p, tau, om = fp.p, fp.tau, fp.omega
    vals = [0] * len(circuit.gates)
    for i, g in enumerate(circuit.gates):
        if g.op == GATE_CONST:
            vals[i] = pow(om, (j * g.a) % tau, p) * (g.b % p) % p
        elif g.op == GATE_ADD:
            vals[i] = (vals[g.a] + vals[g.b]) % p
        else:
            vals[i] = vals[g.a] * vals[g.b] % p
    return vals[circuit.output]


def _dft_blocks(circuit: Circuit, fp: FieldParams, block: int, meter: SpaceMeter | None):
    """Yield (j0, values[j0:j0+w]) of the transformed output, blockwise.

    Per-gate storage is one length-`block` row, reused across blocks;
    singleton rows advance geometrically, so each block costs O(size)
    vector operations regardless of tau.
    """
    p, tau = fp.p, fp.tau
    assert p < _U64_PRIME_LIMIT, "vectorized path requires a word-sized prime"
    pu = np.uint64(p)
    B = min(block, tau)
    gates = circuit.gates
    const_pos = [i for i, g in enumerate(gates) if g.op == GATE_CONST]
    ops = [(g.op, i, g.a, g.b) for i, g in enumerate(gates) if g.op != GATE_CONST]

    steps = [pow(fp.omega, g.a % tau, p) for g in (gates[i] for i in const_pos)]
    rows = np.empty((len(const_pos), B), np.uint64)
    rows[:, 0] = 1
    st = np.asarray(steps, np.uint64)
    for i in range(1, B):
        rows[:, i] = rows[:, i - 1] * st % pu
    jumps = np.asarray([pow(s, B, p) for s in steps], np.uint64)
    cur = np.asarray([gates[i].b % p for i in const_pos], np.uint64)
    cpos = np.asarray(const_pos)
    buf = np.zeros((len(gates), B), np.uint64)

    live = buf.size + rows.size + cur.size + jumps.size + st.size
    for j0 in range(0, tau, B):
        if meter is not None:
            meter.record(live + B + 1)
        buf[cpos] = cur[:, None] * rows % pu
        for op, dest, left, right in ops:
            if op == GATE_ADD:
                np.add(buf[left], buf[right], out=buf[dest])
            else:
                np.multiply(buf[left], buf[right], out=buf[dest])
            buf[dest] %= pu
        yield j0, buf[circuit.output]
        cur = cur * jumps % pu


def evaluate_entry(
    circuit: Circuit,
    fp: FieldParams,
    x: int,
    meter: SpaceMeter | None = None,
    block: int = _BLOCK,
) -> int:
    """out(circuit)[x] mod p, without materializing any length-tau vector.

    Computes (1/tau) * sum_j omega^(-jx) * dft_entry_evaluate(j), processing
    transform indices in fixed-size blocks; peak live field elements are
    O(size * block), independent of tau.
    """
    if not (0 <= x < fp.tau):
        raise ValueError("x out of range")
    p = fp.p
    if p >= _U64_PRIME_LIMIT:
        # scalar fallback for oversized primes
        acc = 0
        for j in range(fp.tau):
            if meter is not None:
                meter.record(len(circuit.gates) + 2)
            term = pow(fp.omega_inv, (j * x) % fp.tau, p) * dft_entry_evaluate(circuit, fp, j)
            acc = (acc + term) % p
        return acc * fp.tau_inv % p

    block = max(2, 1 << (block - 1).bit_length())  # power of two keeps blocks exact
    B = min(block, fp.tau)
    pu = np.uint64(p)
    winv = pow(fp.omega_inv, x, p)
    row = np.empty(B, np.uint64)
    row[0] = 1
    for i in range(1, B):
        row[i] = int(row[i - 1]) * winv % p
    jump = pow(winv, B, p)
    w0 = 1
    acc = 0
    for _, d in _dft_blocks(circuit, fp, B, meter):
        tw = np.uint64(w0) * row % pu
        acc = (acc + int((d * tw % pu).sum())) % p
        w0 = w0 * jump % p
    return acc * fp.tau_inv % p


def evaluate_all_entries(circuit: Circuit, fp: FieldParams, block: int = _BLOCK) -> list[int]:
    """All output entries mod p at once (batched; returns tau values).

    Same per-index transform values as evaluate_entry, inverted with a
    radix-2 transform instead of one sum per entry. Not a low-space
    operation: the result itself has tau entries.
    """
    tau = fp.tau
    if fp.p >= _U64_PRIME_LIMIT:
        spectrum = [dft_entry_evaluate(circuit, fp, j) for j in range(tau)]
        return idft_explicit(spectrum, fp)
    block = max(2, 1 << (block - 1).bit_length())
    spectrum = np.empty(tau, np.uint64)
    for j0, d in _dft_blocks(circuit, fp, min(block, tau), None):
        spectrum[j0 : j0 + len(d)] = d
    out = _ntt_pow2(spectrum, fp.p, fp.omega_inv)
    out = out * np.uint64(fp.tau_inv) % np.uint64(fp.p)
    return [int(v) for v in out]


def dft_explicit(vec, fp: FieldParams) -> list[int]:
    """Definitional transform: F(a)[i] = sum_j omega^(ij) a[j] mod p."""
    return _explicit_transform(vec, fp, fp.omega, 1)


def idft_explicit(vec, fp: FieldParams) -> list[int]:
    """Definitional inverse: (1/tau) sum_i omega^(-ij) a[i] mod p."""
    return _explicit_transform(vec, fp, fp.omega_inv, fp.tau_inv)


def _explicit_transform(vec, fp: FieldParams, root: int, scale: int) -> list[int]:
    tau, p = fp.tau, fp.p
    if len(vec) != tau:
        raise ValueError("vector length must equal tau")
    if p >= _U64_PRIME_LIMIT or tau > (1 << 14):
        out = []
        for i in range(tau):
            s = 0
            for j, a in enumerate(vec):
                s += pow(root, (i * j) % tau, p) * (a % p)
            out.append(s % p * scale % p)
        return out
    pu = np.uint64(p)
    a = np.asarray([v % p for v in vec], np.uint64)
    powers = np.empty(tau, np.uint64)
    powers[0] = 1
    for i in range(1, tau):
        powers[i] = int(powers[i - 1]) * root % p
    out = np.empty(tau, np.uint64)
    idx = np.arange(tau, dtype=np.int64)
    rows_per_chunk = max(1, (1 << 22) // tau)
    for i0 in range(0, tau, rows_per_chunk):
        i1 = min(tau, i0 + rows_per_chunk)
        exps = (idx[i0:i1, None] * idx[None, :]) % tau
        vals = powers[exps] * a % pu
        out[i0:i1] = vals.sum(axis=1) % pu  # each term < 2^32, tau <= 2^14: no overflow
    return [int(v) * scale % p for v in out]


def _ntt_pow2(arr: np.ndarray, p: int, root: int) -> np.ndarray:
    """Radix-2 transform sum_j root^(ij) a[j] for power-of-two lengths."""
    n = len(arr)
    if n & (n - 1):
        raise ValueError("length must be a power of two")
    pu = np.uint64(p)
    a = arr[_bitrev_indices(n)].astype(np.uint64)
    half_tab = _twiddle_table(n, root, p)
    ln = 2
    while ln <= n:
        half = ln // 2
        tw = np.ascontiguousarray(half_tab[:: n // ln][:half])
        b = a.reshape(-1, 2, half)
        u = b[:, 0, :]
        v = b[:, 1, :] * tw % pu
        s = u + v
        d = u + (pu - v)
        b[:, 0, :] = np.where(s >= pu, s - pu, s)
        b[:, 1, :] = np.where(d >= pu, d - pu, d)
        ln *= 2
    return a


def _bitrev_indices(n: int) -> np.ndarray:
    lg = n.bit_length() - 1
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(lg):
        rev |= ((idx >> b) & 1) << (lg - 1 - b)
    return rev


def _twiddle_table(n: int, root: int, p: int) -> np.ndarray:
    # root^j for j < n/2, built with log n vectorized doubling passes
    half = max(n // 2, 1)
    tab = np.ones(half, dtype=np.uint64)
    w = root % p
    idx = np.arange(half, dtype=np.uint64)
    b = 0
    while (1 << b) < half:
        sel = ((idx >> np.uint64(b)) & np.uint64(1)).astype(bool)
        tab[sel] = tab[sel] * np.uint64(w) % np.uint64(p)
        w = w * w % p
        b += 1
    return tab


def polyspace_decide(
    inst: Instance,
    seed: int,
    reps: int = 5,
    pool_size: int | None = None,
) -> bool:
    """Low-space one-sided decision for a multiset instance.

    Per repetition: draw a fresh circuit, a fresh prime from the progression
    1 + k*tau, and a fresh root of unity, then test out(C)[t] != 0. "yes" is
    always correct; each repetition misses an attainable target with small
    probability, so reps=5 pushes the total miss rate below 1e-3 for the
    default failure budget.
    """
    t = inst.target
    if t == 0:
        return True
    reduced = reduce_multiplicities(inst)
    z1, z2 = split_two_sets(reduced)
    if not z1:
        return False
    n = max(1, reduced.size)
    pool = pool_size if pool_size is not None else max(64, n * n)
    delta = min(0.25, 1.0 / n)
    root_rng = Rng(seed)
    for r in range(reps):
        rng = root_rng.child(r)
        b = CircuitBuilder()
        out = _circuit_subset_sum(b, sorted(z1), t, delta, rng)
        if z2:
            out2 = _circuit_subset_sum(b, sorted(z2), t, delta, rng)
            out = b.conv(out, out2)
        bound = b.gates[out].len_bound
        if t > bound:
            continue  # this draw provably cannot reach index t: count as a miss
        circuit = Circuit(tuple(b.gates), out, _tau_for_bound(bound), (n, t, seed))
        fp = FieldParams.generate(circuit.vec_len, pool, rng)
        if evaluate_entry(circuit, fp, t) != 0:
            return True
    return False
