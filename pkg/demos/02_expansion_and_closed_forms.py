"""Taylor expansions of the entropy rate in the two perturbative regimes.

Near-memoryless regime: the chain is M = U + delta*T with U uniform, so at
delta = 0 the observations are iid and the rate is elementary.  The script
expands the rate in delta for the symmetric binary family, where every
coefficient is a plain rational, and checks the first two orders against
the closed-form linear response.

High-SNR regime: the emission is R = I + eps*T, expanded around the
noiseless channel.  The coefficients are exact log-linear values; note the
first-order term does not vanish.
"""

from fractions import Fraction

from hmpseries import (
    am_binary,
    am_binary_reference_series,
    first_order_am,
    first_order_high_snr,
    high_snr_binary,
    rate_series,
)

mu = Fraction(3, 5)  # channel fidelity: emission error (1 - mu)/2 = 1/5
spec = am_binary(mu)
table = rate_series(spec, 13)

print(f"near-memoryless symmetric binary family, fidelity mu = {mu}")
print("k   window   coefficient")
for k, (v, n) in enumerate(zip(table.values, table.n_used)):
    print(f"{k:<3d} {n:<8d} {v.render()}")

reference = am_binary_reference_series(mu, 13)
print("\nmatches the closed-form family expansion:",
      table.values == reference.values)

h0, h1 = first_order_am(spec.R, spec.T)
print(f"linear response at delta=0: h0 = {h0.render()}, h1 = {h1.render()}")
print("(zero by the symmetry of this channel; asymmetric channels respond)")

print("\nhigh-SNR binary family, flip probability p = 1/5")
hs = high_snr_binary(Fraction(1, 5))
hs_table = rate_series(hs, 6)
for k, v in enumerate(hs_table.values):
    print(f"  eps^{k}: {v.render()}")
h0, h1 = first_order_high_snr(hs.M, hs.T)
print(f"closed-form first order: h0 = {h0.render()}, h1 = {h1.render()}")
print("\nnote attached to the high-SNR table:")
print(" ", hs_table.note)
