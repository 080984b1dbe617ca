"""Time evolution of scattering data under the focusing NLSE."""

import numpy as np

from .direct import ScatteringData


def evolve(sd: ScatteringData, t: float) -> ScatteringData:
    """Scattering data at absolute time ``sd.meta['t'] + t``.

    ``b`` and the norming constants pick up ``exp(4 i rho^2 t)``; ``a`` and
    the eigenvalues do not change.  Applying ``evolve`` twice composes the
    phases, so ``evolve(evolve(sd, t1), t2) == evolve(sd, t1 + t2)``.
    """
    out = sd.copy()
    if t == 0:
        return out
    out.b = sd.b * np.exp(4j * sd.rho ** 2 * t)
    out.norming_constants = sd.norming_constants * np.exp(4j * sd.eigenvalues ** 2 * t)
    out.meta["t"] = float(sd.meta.get("t", 0.0)) + float(t)
    return out


def evolve_to(sd: ScatteringData, t: float) -> ScatteringData:
    """Evolve to absolute time ``t`` whatever the current ``meta['t']``."""
    return evolve(sd, t - float(sd.meta.get("t", 0.0)))
