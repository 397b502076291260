"""States in the regular representation of SU(2), stored blockwise.

A pure state is the coefficient family ``psi^(J)_{MN}`` over all irreps
``J <= j_max``, with wavefunction

    psi(g) = sum_J sqrt(N_J) sum_{MN} psi^(J)_{MN} D^J_{MN}(g),   N_J = 2J + 1.

Blocks use the doubled-index conventions of :mod:`.irreps` (row ``i`` of the
spin-``J`` block is ``two_m = two_j - 2*i``).  Mixed states are weighted
ensembles of pure states; only state-pair kernels are ever materialized, no
density matrix over the full coefficient space.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import irreps, su2
from .errors import GridTooCoarse, SchemaError

__all__ = [
    "BlockState",
    "zero_state",
    "basis_state",
    "random_state",
    "norm",
    "inner_product",
    "normalize_state",
    "synthesize",
    "analyze",
    "left_translate",
    "right_translate",
    "u_multiply",
    "dhat_apply",
    "fourier_projector",
    "DensityEnsemble",
    "pure_ensemble",
    "ensemble_kernel",
    "trace_product",
    "density_coefficients",
    "mollified_state",
    "state_to_payload",
    "state_from_payload",
    "save_state",
    "load_state",
]


@dataclass(frozen=True)
class BlockState:
    """Coefficient blocks per irrep; ``blocks[two_j]`` has shape
    ``(two_j + 1, two_j + 1)`` and every ``two_j <= two_jmax`` is present."""

    blocks: tuple

    def __post_init__(self):
        cast = []
        for two_j, block in enumerate(self.blocks):
            block = np.asarray(block, dtype=complex)
            if block.shape != (two_j + 1, two_j + 1):
                raise ValueError(
                    f"block for two_j={two_j} must have shape "
                    f"{(two_j + 1, two_j + 1)}, got {block.shape}"
                )
            cast.append(block)
        if not cast:
            raise ValueError("a state needs at least the two_j = 0 block")
        object.__setattr__(self, "blocks", tuple(cast))

    @property
    def two_jmax(self) -> int:
        return len(self.blocks) - 1


def zero_state(two_jmax: int) -> BlockState:
    return BlockState(
        tuple(np.zeros((t + 1, t + 1), dtype=complex) for t in range(two_jmax + 1))
    )


def basis_state(
    two_j: int, two_m: int, two_n: int, two_jmax: int | None = None
) -> BlockState:
    """The normalized coefficient basis state with a single unit entry."""
    if two_jmax is None:
        two_jmax = two_j
    state = zero_state(two_jmax)
    state.blocks[two_j][(two_j - two_m) // 2, (two_j - two_n) // 2] = 1.0
    return state


def random_state(
    rng: np.random.Generator, two_jmax: int, normalized: bool = True
) -> BlockState:
    blocks = tuple(
        rng.standard_normal((t + 1, t + 1)) + 1j * rng.standard_normal((t + 1, t + 1))
        for t in range(two_jmax + 1)
    )
    state = BlockState(blocks)
    return normalize_state(state) if normalized else state


def inner_product(a: BlockState, b: BlockState) -> complex:
    """Hilbert-space inner product ``<a|b>`` (conjugate-linear in ``a``)."""
    total = 0.0 + 0.0j
    for two_j in range(min(a.two_jmax, b.two_jmax) + 1):
        total += np.sum(np.conj(a.blocks[two_j]) * b.blocks[two_j])
    return complex(total)


def norm(state: BlockState) -> float:
    return float(np.sqrt(inner_product(state, state).real))


def normalize_state(state: BlockState) -> BlockState:
    n = norm(state)
    if n == 0.0:
        raise ValueError("cannot normalize the zero state")
    return BlockState(tuple(b / n for b in state.blocks))


def synthesize(state: BlockState, g) -> np.ndarray:
    """Wavefunction values ``psi(g)``; ``g`` of shape ``(..., 4)``."""
    g = np.asarray(g, dtype=float)
    out = np.zeros(g.shape[:-1], dtype=complex)
    for two_j, block in enumerate(state.blocks):
        if not np.any(block):
            continue
        d = irreps.dmatrix(two_j, g)
        out += np.sqrt(two_j + 1.0) * np.einsum("...mn,mn->...", d, block)
    return out


def analyze(values, two_jmax: int, grid) -> BlockState:
    """Project function values on ``grid`` onto coefficient blocks.

    ``values`` is either an array of samples at ``grid.nodes`` or a callable
    evaluated on them.  Exact for band-limited functions: the projection
    integrand pairs two irreps of label at most ``two_jmax / 2`` each, so the
    grid must satisfy ``2 * exactness_degree >= two_jmax``.
    """
    if 2 * grid.exactness_degree < two_jmax:
        raise GridTooCoarse(
            f"analysis up to two_jmax={two_jmax} needs grid exactness degree "
            f">= {two_jmax}/2, got {grid.exactness_degree}"
        )
    if callable(values):
        values = values(grid.nodes)
    values = np.asarray(values, dtype=complex)
    if values.shape != (grid.n_nodes,):
        raise ValueError("values must match the grid node count")
    wv = grid.weights * values
    blocks = []
    for two_j in range(two_jmax + 1):
        d = irreps.dmatrix(two_j, grid.nodes)
        blocks.append(
            np.sqrt(two_j + 1.0) * np.einsum("x,xmn->mn", wv, np.conj(d))
        )
    return BlockState(tuple(blocks))


def left_translate(state: BlockState, g1) -> BlockState:
    """The state with wavefunction ``psi'(g) = psi(g1^{-1} g)``.

    Blockwise: ``psi'^(J) = conj(D^J(g1)) @ psi^(J)``.
    """
    g1 = np.asarray(g1, dtype=float)
    return BlockState(
        tuple(
            np.conj(irreps.dmatrix(two_j, g1)) @ block
            for two_j, block in enumerate(state.blocks)
        )
    )


def right_translate(state: BlockState, g2) -> BlockState:
    """The state with wavefunction ``psi''(g) = psi(g g2)``.

    Blockwise: ``psi''^(J) = psi^(J) @ D^J(g2).T``.
    """
    g2 = np.asarray(g2, dtype=float)
    return BlockState(
        tuple(
            block @ irreps.dmatrix(two_j, g2).T
            for two_j, block in enumerate(state.blocks)
        )
    )


def u_multiply(state: BlockState, two_j: int, two_m: int, two_n: int) -> BlockState:
    """Multiply the wavefunction pointwise by ``D^j_{mn}(g)``.

    In coefficients this is the Clebsch-Gordan coupled sum; the band grows to
    ``two_jmax + two_j``.
    """
    out = zero_state(state.two_jmax + two_j)
    for two_jp, block in enumerate(state.blocks):
        if not np.any(block):
            continue
        pref_jp = np.sqrt(two_jp + 1.0)
        lo = abs(two_j - two_jp)
        for two_jpp in range(lo, two_j + two_jp + 2, 2):
            target = out.blocks[two_jpp]
            scale = pref_jp / np.sqrt(two_jpp + 1.0)
            for ip, two_mp in enumerate(irreps.two_m_values(two_jp)):
                two_mpp = two_m + int(two_mp)
                if abs(two_mpp) > two_jpp:
                    continue
                cm = irreps.clebsch_gordan(
                    two_j, two_m, two_jp, int(two_mp), two_jpp, two_mpp
                )
                if cm == 0.0:
                    continue
                for kp, two_np in enumerate(irreps.two_m_values(two_jp)):
                    two_npp = two_n + int(two_np)
                    if abs(two_npp) > two_jpp:
                        continue
                    cn = irreps.clebsch_gordan(
                        two_j, two_n, two_jp, int(two_np), two_jpp, two_npp
                    )
                    if cn == 0.0:
                        continue
                    target[
                        (two_jpp - two_mpp) // 2, (two_jpp - two_npp) // 2
                    ] += scale * cm * cn * block[ip, kp]
    return out


def dhat_apply(
    state: BlockState, g, two_j: int, two_m: int, two_n: int, side: str = "left"
) -> BlockState:
    """Apply the displacement-type operator: multiply by ``D^j_{mn}`` and then
    translate by ``g`` (``side='left'``: ``psi -> psi(g^{-1} .)``;
    ``side='right'``: ``psi -> psi(. g)``)."""
    lifted = u_multiply(state, two_j, two_m, two_n)
    if side == "left":
        return left_translate(lifted, g)
    if side == "right":
        return right_translate(lifted, g)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def fourier_projector(
    state: BlockState, two_j: int, two_m: int, two_n: int, grid, side: str = "left"
) -> BlockState:
    """Apply the harmonic projector ``N_J * integral dg D^J_{MN}(g) x
    (translation by g)``, evaluated literally as a quadrature over ``grid``.

    ``side='left'`` uses left translations, ``side='right'`` uses right
    translations with ``D^J_{MN}(g^{-1})`` under the integral.  Acting on
    basis states: the left projector sends ``|J' M' N'>`` to
    ``delta_{J J'} delta_{N M'} |J M N'>``, the right one to
    ``delta_{J J'} delta_{M N'} |J' M' N>``.
    """
    need = max(state.two_jmax, two_j)
    if 2 * grid.exactness_degree < need:
        raise GridTooCoarse(
            f"projector with two_j={two_j} on a band-{state.two_jmax} state "
            f"needs grid exactness degree >= {need}/2, "
            f"got {grid.exactness_degree}"
        )
    i = (two_j - two_m) // 2
    k = (two_j - two_n) // 2
    if side == "left":
        scalars = irreps.dmatrix(two_j, grid.nodes)[:, i, k]
        trans_arg = grid.nodes
    elif side == "right":
        inv_nodes = su2.inverse(grid.nodes)
        scalars = irreps.dmatrix(two_j, inv_nodes)[:, i, k]
        trans_arg = None
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    wsc = (two_j + 1.0) * grid.weights * scalars
    blocks = []
    for two_jp, block in enumerate(state.blocks):
        d = irreps.dmatrix(two_jp, grid.nodes)
        if side == "left":
            kernel = np.einsum("x,xab->ab", wsc, np.conj(d))
            blocks.append(kernel @ block)
        else:
            # right translation by node g uses D^{J'}(g).T on the right
            kernel = np.einsum("x,xab->ab", wsc, d.transpose(0, 2, 1))
            blocks.append(block @ kernel)
    return BlockState(tuple(blocks))


@dataclass(frozen=True)
class DensityEnsemble:
    """Weighted ensemble of pure states: ``rho = sum_i w_i |psi_i><psi_i|``.

    Weights must be positive and sum to 1 (within 1e-10).
    """

    weights: tuple
    states: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or len(w) != len(self.states) or len(w) == 0:
            raise ValueError("weights and states must be equal-length, non-empty")
        if np.any(w <= 0):
            raise ValueError("ensemble weights must be positive")
        if abs(w.sum() - 1.0) > 1e-10:
            raise ValueError(f"ensemble weights must sum to 1, got {w.sum()!r}")
        object.__setattr__(self, "weights", tuple(float(x) for x in w))
        object.__setattr__(self, "states", tuple(self.states))

    @property
    def two_jmax(self) -> int:
        return max(s.two_jmax for s in self.states)


def pure_ensemble(state: BlockState) -> DensityEnsemble:
    return DensityEnsemble((1.0,), (state,))


def as_ensemble(rho) -> DensityEnsemble:
    return rho if isinstance(rho, DensityEnsemble) else pure_ensemble(rho)


def ensemble_kernel(rho, g_row, g_col) -> np.ndarray:
    """Position kernel ``<g_row| rho |g_col> = sum_i w_i psi_i(g_row)
    conj(psi_i(g_col))``; broadcasts over both node arrays."""
    rho = as_ensemble(rho)
    out = None
    for w, state in zip(rho.weights, rho.states):
        term = w * synthesize(state, g_row) * np.conj(synthesize(state, g_col))
        out = term if out is None else out + term
    return out


def trace_product(rho1, rho2) -> float:
    """``Tr(rho1 rho2)`` from coefficient inner products."""
    rho1 = as_ensemble(rho1)
    rho2 = as_ensemble(rho2)
    total = 0.0
    for w, s in zip(rho1.weights, rho1.states):
        for v, t in zip(rho2.weights, rho2.states):
            total += w * v * abs(inner_product(s, t)) ** 2
    return float(total)


def density_coefficients(rho, two_j: int) -> np.ndarray:
    """Matrix elements ``<J M' N'| rho |J M N>`` arranged as
    ``out[M, N, M', N'] = sum_i w_i conj(psi_i[M, N]) psi_i[M', N']``."""
    rho = as_ensemble(rho)
    dim = two_j + 1
    out = np.zeros((dim, dim, dim, dim), dtype=complex)
    for w, state in zip(rho.weights, rho.states):
        if two_j > state.two_jmax:
            continue
        block = state.blocks[two_j]
        out += w * np.einsum("mn,pq->mnpq", np.conj(block), block)
    return out


def mollified_state(center, sigma: float, two_jmax: int, grid) -> BlockState:
    """Normalized band-limited Gaussian bump around ``center``: the analysis
    to band ``two_jmax`` of ``exp(-(dist(center, g) / sigma)^2)``."""
    center = np.asarray(center, dtype=float)
    values = np.exp(-((su2.distance(center, grid.nodes) / sigma) ** 2))
    return normalize_state(analyze(values, two_jmax, grid))


# ---------------------------------------------------------------------------
# state files

def _block_payload(state: BlockState) -> list:
    return [
        {
            "two_j": two_j,
            "re": np.real(block).tolist(),
            "im": np.imag(block).tolist(),
        }
        for two_j, block in enumerate(state.blocks)
    ]


def _blocks_from_payload(items, two_jmax: int) -> BlockState:
    if not isinstance(items, list):
        raise SchemaError("'blocks' must be a list")
    blocks = [None] * (two_jmax + 1)
    for item in items:
        if not isinstance(item, dict) or not {"two_j", "re", "im"} <= set(item):
            raise SchemaError("each block needs keys two_j, re, im")
        two_j = item["two_j"]
        if not isinstance(two_j, int) or not 0 <= two_j <= two_jmax:
            raise SchemaError(f"block two_j={two_j!r} outside 0..{two_jmax}")
        try:
            block = np.asarray(item["re"], dtype=float) + 1j * np.asarray(
                item["im"], dtype=float
            )
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"block two_j={two_j}: {exc}") from None
        if block.shape != (two_j + 1, two_j + 1):
            raise SchemaError(
                f"block two_j={two_j} must be shape {(two_j + 1, two_j + 1)}, "
                f"got {block.shape}"
            )
        if blocks[two_j] is not None:
            raise SchemaError(f"duplicate block two_j={two_j}")
        blocks[two_j] = block
    full = [
        b if b is not None else np.zeros((t + 1, t + 1), dtype=complex)
        for t, b in enumerate(blocks)
    ]
    return BlockState(tuple(full))


def state_to_payload(rho) -> dict:
    """JSON payload for a pure state or ensemble (documented schema)."""
    if isinstance(rho, BlockState):
        return {
            "group": "su2",
            "jmax_twice": rho.two_jmax,
            "blocks": _block_payload(rho),
            "normalized": bool(abs(norm(rho) - 1.0) < 1e-10),
        }
    rho = as_ensemble(rho)
    return {
        "group": "su2",
        "jmax_twice": rho.two_jmax,
        "weights": list(rho.weights),
        "components": [{"blocks": _block_payload(s)} for s in rho.states],
        "normalized": bool(
            all(abs(norm(s) - 1.0) < 1e-10 for s in rho.states)
        ),
    }


def state_from_payload(payload) -> DensityEnsemble:
    """Parse the documented su2 state schema into an ensemble."""
    if not isinstance(payload, dict):
        raise SchemaError("state payload must be a JSON object")
    if payload.get("group") != "su2":
        raise SchemaError(f"unsupported group {payload.get('group')!r}")
    two_jmax = payload.get("jmax_twice")
    if not isinstance(two_jmax, int) or two_jmax < 0:
        raise SchemaError("'jmax_twice' must be a non-negative integer")
    if "blocks" in payload:
        return pure_ensemble(_blocks_from_payload(payload["blocks"], two_jmax))
    if "components" not in payload or "weights" not in payload:
        raise SchemaError("state needs either 'blocks' or 'weights'+'components'")
    comps = payload["components"]
    weights = payload["weights"]
    if not isinstance(comps, list) or not isinstance(weights, list):
        raise SchemaError("'components' and 'weights' must be lists")
    if len(comps) != len(weights):
        raise SchemaError("'components' and 'weights' must be equal length")
    states = []
    for comp in comps:
        if not isinstance(comp, dict) or "blocks" not in comp:
            raise SchemaError("each component needs a 'blocks' list")
        states.append(_blocks_from_payload(comp["blocks"], two_jmax))
    try:
        return DensityEnsemble(tuple(float(w) for w in weights), tuple(states))
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"invalid ensemble: {exc}") from None


def save_state(rho, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_payload(rho), fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def load_state(path) -> DensityEnsemble:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from None
    return state_from_payload(payload)
