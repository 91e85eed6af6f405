"""Forward-only message detouring network: tokens, Laplacian PE, attention stack.

Weights are drawn from a counter-based splitmix64 stream in a fixed order so
that a (config, input width, seed) triple always yields the same model:

    phi_X, phi_I, phi_P, phi_D   each as W1, b1, W2, b2
    then for every layer         W_q, W_k, W_v

Each affine map with fan-in ``f`` draws weights and biases from
U(-1/sqrt(f), 1/sqrt(f)), row-major. Normalisation uses scale 1 and shift 0.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .detour import DEFAULT_BUDGET, den
from .errors import NumericalError
from .graph import Graph

MODE_DEFAULTS = {"graph": (1, 12), "node": (4, 2)}  # (heads, layers)
SELF_TOKEN_DEN = 0.0
BN_EPS = 1e-5
JACOBI_TOL = 1e-10
JACOBI_MAX_SWEEPS = 100
DEGREE_CAP = 16

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)


class SplitMix64:
    def __init__(self, seed: int):
        self._state = np.uint64(seed % 2**64)
        self._drawn = 0

    def next_u64(self, size: int) -> np.ndarray:
        k = np.arange(self._drawn + 1, self._drawn + size + 1, dtype=np.uint64)
        self._drawn += size
        with np.errstate(over="ignore"):
            z = self._state + k * _GOLDEN
            z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))

    def uniform(self, low: float, high: float, shape) -> np.ndarray:
        size = int(np.prod(shape))
        unit = (self.next_u64(size) >> np.uint64(11)).astype(np.float64) * 2.0**-53
        return (low + (high - low) * unit).reshape(shape)


@dataclass(frozen=True)
class MdnnConfig:
    d: int = 64
    n_layers: int | None = None
    n_heads: int | None = None
    pe_dim: int = 8
    k: int = 3
    seed: int = 0
    ablate_detour: bool = False
    mode: str = "graph"

    def __post_init__(self):
        if self.mode not in MODE_DEFAULTS:
            raise ValueError(f"mode must be one of {sorted(MODE_DEFAULTS)}")
        heads, layers = MODE_DEFAULTS[self.mode]
        if self.n_heads is None:
            object.__setattr__(self, "n_heads", heads)
        if self.n_layers is None:
            object.__setattr__(self, "n_layers", layers)
        if self.d < 1 or self.n_heads < 1 or self.d % self.n_heads:
            raise ValueError(f"d={self.d} must be a positive multiple of n_heads={self.n_heads}")
        if self.pe_dim < 1:
            raise ValueError("pe_dim must be >= 1")
        if self.n_layers < 1:
            raise ValueError("n_layers must be >= 1")
        if self.k < 2:
            raise ValueError("k must be >= 2")


@dataclass
class Mlp:
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return np.maximum(x @ self.w1 + self.b1, 0.0) @ self.w2 + self.b2


@dataclass
class AttentionLayer:
    wq: np.ndarray
    wk: np.ndarray
    wv: np.ndarray
    gamma: np.ndarray
    beta: np.ndarray


@dataclass
class MdnnModel:
    in_dim: int
    phi_x: Mlp
    phi_i: Mlp
    phi_p: Mlp
    phi_d: Mlp
    layers: list[AttentionLayer] = field(default_factory=list)


def _affine(rng: SplitMix64, fan_in: int, fan_out: int):
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, (fan_in, fan_out)), rng.uniform(-bound, bound, (fan_out,))


def _mlp(rng: SplitMix64, fan_in: int, d: int) -> Mlp:
    w1, b1 = _affine(rng, fan_in, d)
    w2, b2 = _affine(rng, d, d)
    return Mlp(w1, b1, w2, b2)


def build_model(config: MdnnConfig, in_dim: int) -> MdnnModel:
    rng = SplitMix64(config.seed)
    d = config.d
    model = MdnnModel(
        in_dim,
        phi_x=_mlp(rng, 2 * in_dim, d),
        phi_i=_mlp(rng, 1, d),
        phi_p=_mlp(rng, 2 * config.pe_dim, d),
        phi_d=_mlp(rng, 1, d),
    )
    bound = 1.0 / np.sqrt(d)
    for _ in range(config.n_layers):
        wq = rng.uniform(-bound, bound, (d, d))
        wk = rng.uniform(-bound, bound, (d, d))
        wv = rng.uniform(-bound, bound, (d, d))
        model.layers.append(AttentionLayer(wq, wk, wv, np.ones(d), np.zeros(d)))
    return model


# ---------------------------------------------------------------- spectral


def laplacian(g: Graph) -> np.ndarray:
    a = g.adjacency_matrix.astype(np.float64)
    return np.diag(a.sum(axis=1)) - a


def laplacian_eigh(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and column eigenvectors of L = D - A (cyclic Jacobi).

    Each eigenvector is flipped so its largest-magnitude entry is positive,
    ties going to the lowest index.
    """
    if g.n == 0:
        return np.zeros(0), np.zeros((0, 0))
    w, v, sweeps = _kernels.jacobi_eigh(laplacian(g), JACOBI_TOL, JACOBI_MAX_SWEEPS)
    if sweeps < 0:
        raise NumericalError(f"Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps")
    order = np.argsort(w, kind="stable")
    w, v = w[order], v[:, order]
    for c in range(v.shape[1]):
        if v[np.argmax(np.abs(v[:, c])), c] < 0:
            v[:, c] = -v[:, c]
    return w, v


def laplacian_pe(g: Graph, pe_dim: int) -> np.ndarray:
    """Row ``i`` is node ``i``'s entries in the first ``pe_dim`` eigenvectors, zero padded."""
    if pe_dim < 1:
        raise ValueError("pe_dim must be >= 1")
    _, v = laplacian_eigh(g)
    pe = np.zeros((g.n, pe_dim))
    m = min(pe_dim, g.n)
    pe[:, :m] = v[:, :m]
    return pe


# ---------------------------------------------------------------- tokens


@dataclass
class TokenSet:
    """Tokens grouped by owner node: node ``i`` owns ``tokens[offsets[i]:offsets[i+1]]``.

    The first token of each group is the self token ``(i, i)``; the rest follow
    in ascending neighbour order.
    """

    src: np.ndarray
    dst: np.ndarray
    offsets: np.ndarray
    tokens: np.ndarray
    detour_term: np.ndarray

    def as_dict(self) -> dict[tuple[int, int], np.ndarray]:
        return {(int(i), int(j)): self.tokens[t] for t, (i, j) in enumerate(zip(self.src, self.dst))}


def degree_one_hot(g: Graph, cap: int = DEGREE_CAP) -> np.ndarray:
    x = np.zeros((g.n, cap + 1))
    x[np.arange(g.n), np.minimum(g.degrees, cap)] = 1.0
    return x


def message_tokens(
    g: Graph,
    x_in: np.ndarray,
    model: MdnnModel,
    config: MdnnConfig,
    budget: int = DEFAULT_BUDGET,
) -> TokenSet:
    x_in = np.asarray(x_in, dtype=np.float64)
    if x_in.ndim != 2 or x_in.shape != (g.n, model.in_dim):
        raise ValueError(f"node features must have shape ({g.n}, {model.in_dim}), got {x_in.shape}")
    table = den(g, config.k, budget=budget)
    pe = laplacian_pe(g, config.pe_dim)
    src, dst, dval = [], [], []
    offsets = [0]
    for i in range(g.n):
        src.append(i)
        dst.append(i)
        dval.append(SELF_TOKEN_DEN)
        for j in g.neighbors[i]:
            src.append(i)
            dst.append(j)
            dval.append(float(table.edge(i, j)))
        offsets.append(len(src))
    src = np.array(src, dtype=np.int64)
    dst = np.array(dst, dtype=np.int64)
    ident = (src == dst).astype(np.float64)[:, None]
    tokens = model.phi_x(np.concatenate([x_in[src], x_in[dst]], axis=1))
    tokens = tokens + model.phi_i(ident)
    tokens = tokens + model.phi_p(np.concatenate([pe[src], pe[dst]], axis=1))
    detour = model.phi_d(np.array(dval, dtype=np.float64)[:, None])
    if not config.ablate_detour:
        tokens = tokens + detour
    return TokenSet(src, dst, np.array(offsets, dtype=np.int64), tokens, detour)


# ---------------------------------------------------------------- attention


@dataclass
class FeatureMatrix:
    rows: np.ndarray
    token_log: TokenSet | None = None
    attention: list[np.ndarray] | None = None

    def to_json_obj(self, config: MdnnConfig) -> dict:
        return {"d": int(self.rows.shape[1]), "rows": self.rows.tolist(), "config": asdict(config)}


def _pad(tokens: np.ndarray, offsets: np.ndarray):
    n = len(offsets) - 1
    lengths = np.diff(offsets)
    width = int(lengths.max()) if n else 0
    slot = np.arange(width)
    mask = slot[None, :] < lengths[:, None]
    index = np.where(mask, offsets[:-1, None] + slot[None, :], 0)
    return index, mask


def batch_norm(y: np.ndarray, gamma: np.ndarray, beta: np.ndarray) -> np.ndarray:
    mean = y.mean(axis=0)
    var = ((y - mean) ** 2).mean(axis=0)
    return (y - mean) / np.sqrt(var + BN_EPS) * gamma + beta


def attention_block(
    tokens: np.ndarray, index: np.ndarray, mask: np.ndarray, layer: AttentionLayer, n_heads: int
):
    """Per-node multi-head self-attention, residual, then batch norm over all tokens."""
    n, width = index.shape
    d = tokens.shape[1]
    dh = d // n_heads
    grouped = tokens[index]  # (n, width, d)

    def heads(w):
        return (grouped @ w).reshape(n, width, n_heads, dh).transpose(0, 2, 1, 3)

    q, k, v = heads(layer.wq), heads(layer.wk), heads(layer.wv)
    scores = q @ k.transpose(0, 1, 3, 2) / np.sqrt(dh)
    scores = np.where(mask[:, None, None, :], scores, -np.inf)
    scores = scores - scores.max(axis=-1, keepdims=True)
    weights = np.exp(scores)
    weights /= weights.sum(axis=-1, keepdims=True)
    attended = (weights @ v).transpose(0, 2, 1, 3).reshape(n, width, d)
    out = tokens + attended[mask]
    return batch_norm(out, layer.gamma, layer.beta), weights


def forward(
    g: Graph,
    x_in: np.ndarray | None,
    model: MdnnModel,
    config: MdnnConfig,
    keep_tokens: bool = False,
    keep_attention: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> FeatureMatrix:
    """Node features after ``n_layers`` attention blocks (the self token's row)."""
    if x_in is None:
        x_in = degree_one_hot(g)
    ts = message_tokens(g, x_in, model, config, budget=budget)
    if g.n == 0:
        return FeatureMatrix(np.zeros((0, config.d)), ts if keep_tokens else None)
    index, mask = _pad(ts.tokens, ts.offsets)
    h = ts.tokens
    attn = []
    for li, layer in enumerate(model.layers):
        h, w = attention_block(h, index, mask, layer, config.n_heads)
        if not np.all(np.isfinite(h)):
            raise NumericalError(f"non-finite activations after attention layer {li}")
        if keep_attention:
            attn.append(w)
    rows = h[ts.offsets[:-1]]
    return FeatureMatrix(rows, ts if keep_tokens else None, attn if keep_attention else None)


def run(g: Graph, config: MdnnConfig, x_in: Sequence[Sequence[float]] | None = None, **kw) -> FeatureMatrix:
    x = degree_one_hot(g) if x_in is None else np.asarray(x_in, dtype=np.float64)
    return forward(g, x, build_model(config, x.shape[1]), config, **kw)
