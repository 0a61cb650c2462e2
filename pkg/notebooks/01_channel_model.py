# %% [markdown]
# # The fluctuating double-Rayleigh with line-of-sight channel
#
# The received SNR is ``gamma = gamma_bar |sqrt(k/(k+1)) sqrt(xi) e^{j phi} +
# sqrt(1/(k+1)) G2 G3|^2`` with a unit-mean Gamma shadowing ``xi`` (shape
# ``m``) and two independent complex Gaussians ``G2, G3``. Conditioned on
# ``x = |G3|^2`` this is a shadowed Rician channel; the marginal density
# averages over ``x ~ Exp(1)``.

# %%
import numpy as np
from scipy import integrate

from fdrlos import ChannelParams, marginal_pdf, sample_snr
from fdrlos.channel import conditional_pdf

p = ChannelParams(k=20.0, m=2.0, gamma_bar=10.0)
print(p)

# %% [markdown]
# ## Conditional and marginal densities
#
# The conditional density has a Gamma-mixture form; small ``x`` pushes the
# mass towards the LoS level, large ``x`` towards the scattered term.

# %%
gammas = np.array([0.1, 1.0, 5.0, 10.0, 20.0, 40.0])
for x in (0.1, 1.0, 4.0):
    print(f"x={x:4.1f}", np.array2string(conditional_pdf(gammas, x, p), precision=4))
print("marginal", np.array2string(marginal_pdf(gammas, p), precision=4))

# %% [markdown]
# ## Normalisation and unit mean
#
# On a logarithmic grid ``gamma = e^v`` both moments are smooth integrals.

# %%
v = np.linspace(-30, 7, 3701)
g = np.exp(v)
f = marginal_pdf(g, p) * g
print("integral of pdf   :", np.trapezoid(f, v))
print("mean / gamma_bar  :", np.trapezoid(f * g, v) / p.gamma_bar)

# %% [markdown]
# ## Sampling the physical model
#
# Monte-Carlo draws come from the physical construction, not from the
# density, so they are an independent check of it.

# %%
rng = np.random.default_rng(1)
draws = sample_snr(p, rng, size=1_000_000)
edges = np.array([0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 15.0, 20.0, np.inf])
counts, _ = np.histogram(draws, edges)
print("sample mean / gamma_bar:", draws.mean() / p.gamma_bar)
print("      bin          empirical  model   z-score")
for lo, hi, c in zip(edges[:-1], edges[1:], counts):
    model = integrate.quad(lambda y: float(marginal_pdf(y, p)), lo, hi, limit=200)[0]
    emp = c / draws.size
    z = (emp - model) / np.sqrt(model * (1 - model) / draws.size)
    print(f"[{lo:7.3f}, {hi:7.3f})  {emp:.4f}    {model:.4f}  {z:+.2f}")
