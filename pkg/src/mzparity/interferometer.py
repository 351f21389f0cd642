"""Beam-splitter, phase-shifter and full-interferometer transforms.

Conventions, fixed once and cross-checked against the brute-force oracle:

* the 50:50 beam splitter is exp(-i pi/2 J_x) (``inverse=False``) or its
  adjoint exp(+i pi/2 J_x) (``inverse=True``), realized through the
  factorization exp(-i pi/2 J_x) = exp(i pi/2 J_z) exp(-i pi/2 J_y)
  exp(-i pi/2 J_z): diagonal phases around a real d-block at -+ pi/2.
  Applying it toggles the frame tag.
* the phase shifter multiplies |j,mu> by exp(-i mu phi) and acts only on
  inside-interferometer states.
* the full interferometer is exp(-i phi J_y), one real d-block per j;
  the composition beam splitter -> phase shifter -> inverse beam splitter
  reproduces it exactly (not merely up to phase), which the tests check.

The parity operator on one output mode, P = (-1)^(j - J_z), is diagonal
in this basis; conjugating it through the output beam splitter gives the
inside-frame detection operator Q = exp(-i pi/2 J_x) P exp(+i pi/2 J_x),
whose exact matrix elements are <j,nu|Q|j,mu> = i^N (-1)^(j-nu)
delta_{nu,-mu} with N = 2j.
"""

from __future__ import annotations

import math
import operator

import numpy as np

from .errors import DomainError, FrameError
from .states import Frame, TwoModeState
from .wigner import _eigen_d_block

__all__ = [
    "apply_beam_splitter",
    "apply_mzi",
    "apply_phase_shifter",
    "parity_apply",
    "q_apply",
    "q_matrix_element",
]


def _rebuild(state: TwoModeState, blocks: dict[int, np.ndarray], frame: Frame) -> TwoModeState:
    return TwoModeState(blocks, frame, state.label, state.truncation_tail)


def apply_mzi(state: TwoModeState, phi: float) -> TwoModeState:
    """Full interferometer exp(-i phi J_y), block by block."""
    if state.frame is not Frame.AT_INPUT:
        raise FrameError(
            "apply_mzi needs an at-input state; use apply_phase_shifter for "
            "inside-interferometer states"
        )
    phi = float(phi)
    blocks = {
        two_j: _eigen_d_block(two_j, phi) @ vec
        for two_j, vec in state.components.items()
    }
    return _rebuild(state, blocks, state.frame)


def apply_beam_splitter(state: TwoModeState, inverse: bool = False) -> TwoModeState:
    """50:50 beam splitter exp(-+ i pi/2 J_x); toggles the frame tag."""
    middle = -0.5 * math.pi if inverse else 0.5 * math.pi
    blocks: dict[int, np.ndarray] = {}
    for two_j, vec in state.components.items():
        mu = state.mu_values(two_j)
        inner = np.exp(-0.5j * math.pi * mu) * vec
        rotated = _eigen_d_block(two_j, middle) @ inner
        blocks[two_j] = np.exp(0.5j * math.pi * mu) * rotated
    flipped = (
        Frame.INSIDE_INTERFEROMETER
        if state.frame is Frame.AT_INPUT
        else Frame.AT_INPUT
    )
    return _rebuild(state, blocks, flipped)


def apply_phase_shifter(state: TwoModeState, phi: float) -> TwoModeState:
    """Phase accumulation exp(-i phi J_z) between the beam splitters."""
    if state.frame is not Frame.INSIDE_INTERFEROMETER:
        raise FrameError("apply_phase_shifter needs an inside-interferometer state")
    phi = float(phi)
    blocks = {
        two_j: np.exp(-1j * phi * state.mu_values(two_j)) * vec
        for two_j, vec in state.components.items()
    }
    return _rebuild(state, blocks, state.frame)


def parity_apply(two_j: int, vec: np.ndarray) -> np.ndarray:
    """P = (-1)^(j - J_z) on one block: sign (-1)^index, diagonal."""
    signs = np.where(np.arange(two_j + 1) % 2 == 0, 1.0, -1.0)
    return signs * vec


def q_apply(two_j: int, vec: np.ndarray) -> np.ndarray:
    """Q = exp(-i pi/2 J_x) P exp(+i pi/2 J_x) on one block.

    (Q v)_i = i^N (-1)^i v_(n-1-i): an anti-diagonal with alternating
    signs and a global i^N.
    """
    n = two_j + 1
    signs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    return (1j**two_j) * signs * vec[::-1]


def q_matrix_element(n_total: int, k: int, k_p: int) -> complex:
    """<k', N-k'| Q |N-k, k> in photon numbers, as commonly quoted.

    Returns i^N (-1)^k when k' = N - k, else 0.  This is the literal
    published form; for odd N it differs from the operator realized by
    q_apply by a global sign, which the detection engine documents and
    does not use.
    """
    try:
        n_total = operator.index(n_total)
        k = operator.index(k)
        k_p = operator.index(k_p)
    except TypeError:
        raise DomainError("q_matrix_element needs integer arguments") from None
    if n_total < 1:
        raise DomainError(f"n_total must be positive, got {n_total}")
    if not (0 <= k <= n_total and 0 <= k_p <= n_total):
        raise DomainError(
            f"photon indices must lie in [0, {n_total}], got k={k}, k'={k_p}"
        )
    if k_p != n_total - k:
        return 0j
    return (1j**n_total) * ((-1) ** k)
