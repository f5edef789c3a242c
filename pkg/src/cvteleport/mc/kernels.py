"""Euler-Maruyama integration kernels for the teleporter chain.

Two implementations of the same update rule: a numba @njit kernel looping
trajectories then time, and a pure-numpy kernel vectorized across
trajectories.  Both consume identical pre-drawn standard-normal arrays and
apply the identical per-element arithmetic, so their outputs agree to
floating-point reordering.  Set CVTELEPORT_FORCE_NUMPY=1 to select the
numpy path (e.g. where numba is unavailable); see benchmarks/ for the
speed comparison.

State layout per trajectory (all real quadratures):
  0 x_a, 1 y_a   squeezer providing the X-channel correction
  2 x_b, 3 y_b   squeezer providing the Y-channel correction
  4 I_X, 5 I_Y   Alice's low-passed photocurrent record
  6 m_X, 7 m_Y   Bob's output filter state (filtered field)
  8 c_X, 9 c_Y   input source mode (OU surrogate)

Noise channels per step (standard normal, scaled by sqrt(dt/2) inside --
vacuum symmetric spectral density 1/2 per quadrature):
  0,1 input vacuum; 2,3 squeezer a; 4,5 squeezer b; 6,7 filter-output
  vacuum; 8,9 source drive.

Tap layout per step:
  0,1 output field E_out (X, Y), midpoint filter state minus reflected
      vacuum; 2,3 squeezer-a output (X, Y); 4,5 filter state m (X, Y).
"""

from __future__ import annotations

import math
import os

import numpy as np

FORCE_NUMPY = os.environ.get("CVTELEPORT_FORCE_NUMPY", "") not in ("", "0")

N_STATE = 10
N_NOISE = 10
N_TAPS = 6


def _integrate_numpy(state, z, dt, gamma_i, gamma_s, gamma_A, gamma_B,
                     gamma_plus, gamma_minus, alpha, ou_sigma, ou_on, bypass,
                     taps):
    nt, ns, _ = z.shape
    sn = math.sqrt(0.5 * dt)
    s2gs = math.sqrt(2.0 * gamma_s)
    s2gi = math.sqrt(2.0 * gamma_i)
    sq2 = math.sqrt(2.0)
    ein_x = sq2 * alpha

    xa = state[:, 0].copy(); ya = state[:, 1].copy()
    xb = state[:, 2].copy(); yb = state[:, 3].copy()
    i_x = state[:, 4].copy(); i_y = state[:, 5].copy()
    m_x = state[:, 6].copy(); m_y = state[:, 7].copy()
    c_x = state[:, 8].copy(); c_y = state[:, 9].copy()

    for k in range(ns):
        db = sn * z[:, k, :]
        db_in_x = db[:, 0]; db_in_y = db[:, 1]
        db_a_x = db[:, 2]; db_a_y = db[:, 3]
        db_b_x = db[:, 4]; db_b_y = db[:, 5]
        db_o_x = db[:, 6]; db_o_y = db[:, 7]

        src_x = ein_x + (s2gi * c_x if ou_on else 0.0)
        src_y = s2gi * c_y if ou_on else 0.0

        dq_x = (src_x / sq2 + 0.5 * (s2gs * xa + s2gs * xb)) * dt \
            - db_in_x / sq2 - 0.5 * (db_a_x + db_b_x)
        dq_y = (src_y / sq2 - 0.5 * (s2gs * ya + s2gs * yb)) * dt \
            - db_in_y / sq2 + 0.5 * (db_a_y + db_b_y)

        if bypass:
            eb_sm_x = src_x + 0.0 * xa
            eb_sm_y = src_y + 0.0 * ya
            eb_w_x = -db_in_x
            eb_w_y = -db_in_y
        else:
            eb_sm_x = (s2gs * xa - s2gs * xb) / sq2 + sq2 * i_x
            eb_sm_y = (s2gs * ya - s2gs * yb) / sq2 + sq2 * i_y
            eb_w_x = (db_b_x - db_a_x) / sq2
            eb_w_y = (db_b_y - db_a_y) / sq2

        m_x_new = m_x + gamma_B * (eb_sm_x - m_x) * dt + gamma_B * (eb_w_x + db_o_x)
        m_y_new = m_y + gamma_B * (eb_sm_y - m_y) * dt + gamma_B * (eb_w_y + db_o_y)

        xa_new = xa - gamma_plus * xa * dt + s2gs * db_a_x
        ya_new = ya - gamma_minus * ya * dt + s2gs * db_a_y
        xb_new = xb - gamma_minus * xb * dt + s2gs * db_b_x
        yb_new = yb - gamma_plus * yb * dt + s2gs * db_b_y

        taps[:, k, 0] = 0.5 * (m_x + m_x_new) - db_o_x / dt
        taps[:, k, 1] = 0.5 * (m_y + m_y_new) - db_o_y / dt
        taps[:, k, 2] = s2gs * 0.5 * (xa + xa_new) - db_a_x / dt
        taps[:, k, 3] = s2gs * 0.5 * (ya + ya_new) - db_a_y / dt
        taps[:, k, 4] = m_x_new
        taps[:, k, 5] = m_y_new

        i_x = i_x - gamma_A * i_x * dt + gamma_A * dq_x
        i_y = i_y - gamma_A * i_y * dt + gamma_A * dq_y
        if ou_on:
            c_x = c_x - gamma_i * c_x * dt + ou_sigma * s2gi * sn * z[:, k, 8]
            c_y = c_y - gamma_i * c_y * dt + ou_sigma * s2gi * sn * z[:, k, 9]
        xa, ya, xb, yb = xa_new, ya_new, xb_new, yb_new
        m_x, m_y = m_x_new, m_y_new

    state[:, 0] = xa; state[:, 1] = ya
    state[:, 2] = xb; state[:, 3] = yb
    state[:, 4] = i_x; state[:, 5] = i_y
    state[:, 6] = m_x; state[:, 7] = m_y
    state[:, 8] = c_x; state[:, 9] = c_y


if not FORCE_NUMPY:
    import numba

    @numba.njit(cache=True, nogil=True)
    def _integrate_numba(state, z, dt, gamma_i, gamma_s, gamma_A, gamma_B,
                         gamma_plus, gamma_minus, alpha, ou_sigma, ou_on,
                         bypass, taps):  # pragma: no cover - timed via tests
        nt, ns, _ = z.shape
        sn = math.sqrt(0.5 * dt)
        s2gs = math.sqrt(2.0 * gamma_s)
        s2gi = math.sqrt(2.0 * gamma_i)
        sq2 = math.sqrt(2.0)
        ein_x = sq2 * alpha

        for i in range(nt):
            xa = state[i, 0]; ya = state[i, 1]
            xb = state[i, 2]; yb = state[i, 3]
            i_x = state[i, 4]; i_y = state[i, 5]
            m_x = state[i, 6]; m_y = state[i, 7]
            c_x = state[i, 8]; c_y = state[i, 9]

            for k in range(ns):
                db_in_x = sn * z[i, k, 0]; db_in_y = sn * z[i, k, 1]
                db_a_x = sn * z[i, k, 2]; db_a_y = sn * z[i, k, 3]
                db_b_x = sn * z[i, k, 4]; db_b_y = sn * z[i, k, 5]
                db_o_x = sn * z[i, k, 6]; db_o_y = sn * z[i, k, 7]

                if ou_on:
                    src_x = ein_x + s2gi * c_x
                    src_y = s2gi * c_y
                else:
                    src_x = ein_x
                    src_y = 0.0

                dq_x = (src_x / sq2 + 0.5 * (s2gs * xa + s2gs * xb)) * dt \
                    - db_in_x / sq2 - 0.5 * (db_a_x + db_b_x)
                dq_y = (src_y / sq2 - 0.5 * (s2gs * ya + s2gs * yb)) * dt \
                    - db_in_y / sq2 + 0.5 * (db_a_y + db_b_y)

                if bypass:
                    eb_sm_x = src_x + 0.0 * xa
                    eb_sm_y = src_y + 0.0 * ya
                    eb_w_x = -db_in_x
                    eb_w_y = -db_in_y
                else:
                    eb_sm_x = (s2gs * xa - s2gs * xb) / sq2 + sq2 * i_x
                    eb_sm_y = (s2gs * ya - s2gs * yb) / sq2 + sq2 * i_y
                    eb_w_x = (db_b_x - db_a_x) / sq2
                    eb_w_y = (db_b_y - db_a_y) / sq2

                m_x_new = m_x + gamma_B * (eb_sm_x - m_x) * dt + gamma_B * (eb_w_x + db_o_x)
                m_y_new = m_y + gamma_B * (eb_sm_y - m_y) * dt + gamma_B * (eb_w_y + db_o_y)

                xa_new = xa - gamma_plus * xa * dt + s2gs * db_a_x
                ya_new = ya - gamma_minus * ya * dt + s2gs * db_a_y
                xb_new = xb - gamma_minus * xb * dt + s2gs * db_b_x
                yb_new = yb - gamma_plus * yb * dt + s2gs * db_b_y

                taps[i, k, 0] = 0.5 * (m_x + m_x_new) - db_o_x / dt
                taps[i, k, 1] = 0.5 * (m_y + m_y_new) - db_o_y / dt
                taps[i, k, 2] = s2gs * 0.5 * (xa + xa_new) - db_a_x / dt
                taps[i, k, 3] = s2gs * 0.5 * (ya + ya_new) - db_a_y / dt
                taps[i, k, 4] = m_x_new
                taps[i, k, 5] = m_y_new

                i_x = i_x - gamma_A * i_x * dt + gamma_A * dq_x
                i_y = i_y - gamma_A * i_y * dt + gamma_A * dq_y
                if ou_on:
                    c_x = c_x - gamma_i * c_x * dt + ou_sigma * s2gi * sn * z[i, k, 8]
                    c_y = c_y - gamma_i * c_y * dt + ou_sigma * s2gi * sn * z[i, k, 9]
                xa = xa_new; ya = ya_new; xb = xb_new; yb = yb_new
                m_x = m_x_new; m_y = m_y_new

            state[i, 0] = xa; state[i, 1] = ya
            state[i, 2] = xb; state[i, 3] = yb
            state[i, 4] = i_x; state[i, 5] = i_y
            state[i, 6] = m_x; state[i, 7] = m_y
            state[i, 8] = c_x; state[i, 9] = c_y


def integrate_chain(state, z, dt, *, gamma_i, gamma_s, gamma_A, gamma_B,
                    gamma_plus, gamma_minus, alpha=0.0, ou_sigma=0.0,
                    ou_on=False, bypass=False, backend: str | None = None):
    """Advance the chain by z.shape[1] Euler-Maruyama steps.

    state (n_traj, 10) is updated in place; returns taps (n_traj, n_steps, 6).
    backend: None picks numba unless CVTELEPORT_FORCE_NUMPY is set;
    'numba' / 'numpy' force a path.
    """
    if not (state.flags.c_contiguous and state.dtype == np.float64):
        raise ValueError("state must be a C-contiguous float64 array")
    z = np.ascontiguousarray(z, dtype=np.float64)
    if state.shape[1] != N_STATE or z.shape[2] != N_NOISE or z.shape[0] != state.shape[0]:
        raise ValueError("state/noise shape mismatch")
    taps = np.empty((state.shape[0], z.shape[1], N_TAPS))
    if backend is None:
        backend = "numpy" if FORCE_NUMPY else "numba"
    if backend == "numba":
        if FORCE_NUMPY:
            raise RuntimeError("numba backend requested but CVTELEPORT_FORCE_NUMPY is set")
        fn = _integrate_numba
    elif backend == "numpy":
        fn = _integrate_numpy
    else:
        raise ValueError(f"unknown backend {backend!r}")
    fn(state, z, dt, gamma_i, gamma_s, gamma_A, gamma_B, gamma_plus,
       gamma_minus, alpha, ou_sigma, ou_on, bypass, taps)
    return taps
