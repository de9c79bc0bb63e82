"""Mixed derivatives with one perturbation parameter per site.

Give every site its own parameter (eps_1, ..., eps_n in the high-SNR
regime) and differentiate the window entropy once or more per site.  Three
structural facts fall out, and all three are verified here with exact
arithmetic:

  vanishing:  a zero order strictly between two active sites kills the
              derivative outright;
  padding:    leading inactive sites never change the value;
  blocking:   setting one site's parameter to zero splits the window, so
              the value collapses onto the suffix after the zero.
"""

from fractions import Fraction

from hmpseries import (
    MultiSiteSpec,
    high_snr_binary,
    multisite_derivative,
    multisite_value,
)

F = Fraction
spec = high_snr_binary(F(1, 5))

print("vanishing: derivative orders (1, 0, 1) over a 3-site window")
v = multisite_derivative(MultiSiteSpec(3, (1, 0, 1)), spec)
print(f"  value = {v.render()}   (exactly zero)\n")

print("padding: (0, 2) over 2 sites vs (0, 0, 0, 2) over 4 sites")
a = multisite_derivative(MultiSiteSpec(2, (0, 2)), spec)
b = multisite_derivative(MultiSiteSpec(4, (0, 0, 0, 2)), spec)
print(f"  {a.render()}  ==  {b.render()}:", a == b, "\n")

print("blocking: parameters (1/7, 1/11, 0, 1/5, 1/9) vs suffix (0, 1/5, 1/9)")
full = multisite_value(spec, (F(1, 7), F(1, 11), 0, F(1, 5), F(1, 9)))
tail = multisite_value(spec, (0, F(1, 5), F(1, 9)))
print(f"  5-site window: {full.render()}")
print(f"  3-site suffix: {tail.render()}")
print("  equal exactly:", full == tail)
