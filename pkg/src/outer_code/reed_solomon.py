"""
Systematic Reed-Solomon outer code over GF(2^m).

The generator is the Vandermonde matrix G[i][j] = mu_j^i on the canonical
evaluation points (0, 1, alpha, alpha^2, ...), brought to systematic form
[I | P] by Gauss-Jordan elimination. Decoding corrects errors and erasures
with 2e + s <= l2 using Gao's interpolation/partial-Euclid decoder.
"""
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, List, Optional, Sequence
import logging

import numpy as np

from src.config import settings
from src.exceptions import ContractError, InfeasibleDesignError, RsDecodeFailure, ScaleError
from src.outer_code.gf2m import FieldSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RsCode:
    """[L, l1] systematic RS code. Immutable after rs_build."""
    field: FieldSpec
    L: int
    l1: int
    eval_points: np.ndarray = field(repr=False)
    vandermonde: np.ndarray = field(repr=False)
    gen_systematic: np.ndarray = field(repr=False)

    @property
    def l2(self) -> int:
        return self.L - self.l1

    @property
    def dmin(self) -> int:
        return self.l2 + 1

    @property
    def parity_matrix(self) -> np.ndarray:
        return self.gen_systematic[:, self.l1:]


@dataclass
class PreimageResult:
    """Systematic messages sharing one parity vector."""
    count: int
    preimages: Optional[np.ndarray] = None


def rs_build(field: FieldSpec, L: int, l1: int) -> RsCode:
    """
    Build the systematic [L, l1] code.

    Args:
        field: Symbol alphabet
        L: Code length in symbols
        l1: Message length in symbols

    Returns:
        RsCode whose gen_systematic = A^-1 G with identity left block
    """
    if L > field.size:
        raise InfeasibleDesignError(
            f"RS length L={L} exceeds field size 2^{field.m}={field.size}",
            constraint="L <= 2^m",
        )
    if not 1 <= l1 < L:
        raise ContractError(f"RS dimension requires 1 <= l1 < L, got l1={l1}, L={L}")

    points = np.array([field.element_at(i) for i in range(L)], dtype=np.int64)
    G = np.zeros((l1, L), dtype=np.int64)
    G[0, :] = 1
    for i in range(1, l1):
        G[i] = field.mul_array(G[i - 1], points)

    M = G.copy()
    for col in range(l1):
        nonzero = np.nonzero(M[col:, col])[0]
        if len(nonzero) == 0:
            raise InfeasibleDesignError(
                f"Vandermonde block singular at column {col}", constraint="distinct points"
            )
        pivot = col + int(nonzero[0])
        if pivot != col:
            M[[col, pivot]] = M[[pivot, col]]
        M[col] = field.mul_array(M[col], field.inv(int(M[col, col])))
        for r in range(l1):
            if r != col and M[r, col]:
                M[r] ^= field.mul_array(M[col], int(M[r, col]))

    logger.debug(f"Built systematic RS[{L},{l1}] over GF(2^{field.m})")
    return RsCode(field=field, L=L, l1=l1, eval_points=points, vandermonde=G, gen_systematic=M)


def rs_encode(code: RsCode, msg: Sequence[int]) -> np.ndarray:
    """Systematic encoding msg -> msg . [I | P]."""
    msg = np.asarray(msg, dtype=np.int64)
    if msg.shape != (code.l1,):
        raise ContractError(f"RS message must have {code.l1} symbols, got shape {msg.shape}")
    if np.any((msg < 0) | (msg >= code.field.size)):
        raise ContractError("RS message symbols outside the field")
    return code.field.matmul(msg[None, :], code.gen_systematic)[0]


def rs_encode_many(code: RsCode, msgs: np.ndarray) -> np.ndarray:
    """Encode each row of msgs (shape (k, l1))."""
    msgs = np.asarray(msgs, dtype=np.int64)
    if msgs.ndim != 2 or msgs.shape[1] != code.l1:
        raise ContractError(f"RS message batch must have shape (k, {code.l1})")
    return code.field.matmul(msgs, code.gen_systematic)


# Polynomials are coefficient lists, lowest degree first, without trailing zeros.

def _trim(p: List[int]) -> List[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _deg(p: List[int]) -> int:
    return len(p) - 1


def _poly_add(a: List[int], b: List[int]) -> List[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] ^= c
    return _trim(out)


def _poly_mul(f: FieldSpec, a: List[int], b: List[int]) -> List[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            if cb:
                out[i + j] ^= f.mul(ca, cb)
    return _trim(out)


def _poly_divmod(f: FieldSpec, num: List[int], den: List[int]):
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(num)
    if len(rem) < len(den):
        return [], _trim(rem)
    quot = [0] * (len(rem) - len(den) + 1)
    lead_inv = f.inv(den[-1])
    for shift in range(len(rem) - len(den), -1, -1):
        coef = f.mul(rem[shift + len(den) - 1], lead_inv)
        quot[shift] = coef
        if coef:
            for j, d in enumerate(den):
                if d:
                    rem[shift + j] ^= f.mul(coef, d)
    return _trim(quot), _trim(rem[: len(den) - 1])


def _poly_eval(f: FieldSpec, p: List[int], x: int) -> int:
    acc = 0
    for c in reversed(p):
        acc = f.mul(acc, x) ^ c
    return acc


def _interpolate(f: FieldSpec, xs: List[int], ys: List[int]):
    """Return (g0, g1): g0 = prod(x - x_i), g1 interpolates ys on xs."""
    g0 = [1]
    for xi in xs:
        g0 = _poly_mul(f, g0, [xi, 1])
    g1: List[int] = []
    for xi, yi in zip(xs, ys):
        if yi == 0:
            continue
        basis, _ = _poly_divmod(f, g0, [xi, 1])
        scale = f.div(yi, _poly_eval(f, basis, xi))
        g1 = _poly_add(g1, [f.mul(scale, c) for c in basis])
    return g0, g1


def rs_decode(code: RsCode, received: Sequence[int], erasures: Iterable[int] = ()) -> np.ndarray:
    """
    Errors-and-erasures decoding.

    Args:
        code: RS code
        received: L received symbols (values at erased positions are ignored)
        erasures: Distinct erased positions

    Returns:
        The l1 message symbols

    Raises:
        RsDecodeFailure: when no codeword lies within 2e + s <= l2
    """
    received = np.asarray(received, dtype=np.int64)
    if received.shape != (code.L,):
        raise ContractError(f"Received word must have {code.L} symbols, got shape {received.shape}")
    erasure_list = [int(i) for i in erasures]
    erased = sorted(set(erasure_list))
    if len(erased) != len(erasure_list):
        raise ContractError("Erasure indices must be distinct")
    if erased and (erased[0] < 0 or erased[-1] >= code.L):
        raise ContractError("Erasure index out of range")

    s = len(erased)
    if s > code.l2:
        raise RsDecodeFailure(f"{s} erasures exceed parity length {code.l2}")

    f = code.field
    erased_set = set(erased)
    keep = [i for i in range(code.L) if i not in erased_set]
    xs = [int(code.eval_points[i]) for i in keep]
    ys = [int(received[i]) for i in keep]
    n_pts, k = len(keep), code.l1

    g0, g1 = _interpolate(f, xs, ys)

    # Partial extended Euclid on (g0, g1) until deg(remainder) < (n_pts + k) / 2.
    r_prev, r_cur = g0, g1
    v_prev, v_cur = [], [1]
    while r_cur and 2 * _deg(r_cur) >= n_pts + k:
        q, rem = _poly_divmod(f, r_prev, r_cur)
        r_prev, r_cur = r_cur, rem
        v_prev, v_cur = v_cur, _poly_add(v_prev, _poly_mul(f, q, v_cur))

    message_poly, rem = _poly_divmod(f, r_cur, v_cur)
    if rem or len(message_poly) > k:
        raise RsDecodeFailure("no codeword within the correction radius")

    codeword = np.array([_poly_eval(f, message_poly, int(x)) for x in code.eval_points], dtype=np.int64)
    errors = int(np.count_nonzero(codeword[keep] != received[keep]))
    if 2 * errors + s > code.l2:
        raise RsDecodeFailure(f"pattern 2e+s = {2 * errors + s} exceeds l2 = {code.l2}")

    logger.debug(f"RS decode ok: {errors} errors, {s} erasures")
    return codeword[: code.l1].copy()


def rs_weight_distribution(L: int, dmin: int, field_size: int, i: int) -> int:
    """Exact number of weight-i codewords of an MDS [L, L - dmin + 1] code."""
    if i > L or i < 0:
        raise ContractError(f"Weight index {i} outside [0, {L}]")
    if i < dmin:
        return 0
    total = sum(
        (-1) ** j * comb(i - 1, j) * field_size ** (i - dmin - j)
        for j in range(i - dmin + 1)
    )
    return comb(L, i) * (field_size - 1) * total


def rs_enumerate_messages(code: RsCode) -> np.ndarray:
    """Every message vector, shape (|F|^l1, l1); capped by settings.enumeration_cap."""
    total = code.field.size ** code.l1
    if total > settings.enumeration_cap:
        raise ScaleError(
            f"Enumerating {total} messages exceeds cap {settings.enumeration_cap}"
        )
    grid = np.indices((code.field.size,) * code.l1).reshape(code.l1, -1).T
    return grid.astype(np.int64)


def rs_enumerate_codewords(code: RsCode) -> np.ndarray:
    """Every codeword of the code, one per row."""
    return rs_encode_many(code, rs_enumerate_messages(code))


def rs_preimage_count(code: RsCode, parity: Sequence[int], enumerate_preimages: bool = False) -> PreimageResult:
    """
    Count systematic messages mapping to a parity vector.

    Args:
        code: RS code with l1 >= l2
        parity: l2 parity symbols
        enumerate_preimages: also list them (tiny codes only)

    Returns:
        PreimageResult with count |F|^(l1 - l2)
    """
    if code.l1 < code.l2:
        raise ContractError(f"Preimage count requires l1 >= l2, got l1={code.l1}, l2={code.l2}")
    parity = np.asarray(parity, dtype=np.int64)
    if parity.shape != (code.l2,):
        raise ContractError(f"Parity vector must have {code.l2} symbols")

    count = code.field.size ** (code.l1 - code.l2)
    if not enumerate_preimages:
        return PreimageResult(count=count)

    messages = rs_enumerate_messages(code)
    parities = code.field.matmul(messages, code.parity_matrix)
    hits = messages[np.all(parities == parity[None, :], axis=1)]
    return PreimageResult(count=len(hits), preimages=hits)
