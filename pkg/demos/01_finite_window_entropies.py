"""Exact finite-window entropies and the two-sided entropy-rate bracket.

A hidden Markov process has no closed-form entropy rate, but the window
quantities C_n = H_n - H_{n-1} (from above) and c_n = H(Y_n | X_1, Y_1..Y_{n-1})
(from below) squeeze it.  Everything here is computed exactly: values are
rationals plus rational multiples of logs of primes, so you can see the
algebraic structure instead of sixteen digits.
"""

from fractions import Fraction

from hmpseries import (
    FLOAT64,
    entropy_rate_bracket,
    finite_entropy,
    high_snr_binary,
    instantiate,
    sample_path,
    sequence_log_probability,
)

# A binary symmetric chain (flip probability 1/5) seen through a symmetric
# channel with error 1/5: the emission matrix is I + (1/5) T.
model = instantiate(high_snr_binary(Fraction(1, 5)), Fraction(1, 5))

print("exact block entropies H_n (nats):")
for n in range(1, 6):
    h = finite_entropy(model, n)
    print(f"  H_{n} = {h.render():55s} = {float(h):.12f}")

print("\nthe bracket c_n <= entropy rate <= C_n tightens as n grows:")
for n in range(2, 8):
    b = entropy_rate_bracket(model, n)
    print(
        f"  n={n}:  [{float(b.lower):.10f}, {float(b.upper):.10f}]"
        f"   half-gap {float(b.half_gap):.2e}"
    )

# Long-path sanity check: by equipartition, -(1/n) log P(path) concentrates
# on the entropy rate, which must land inside the bracket.
xs, ys = sample_path(model, 200_000, seed=1)
estimate = -sequence_log_probability(model, ys, FLOAT64) / len(ys)
b = entropy_rate_bracket(model, 7)
print(f"\npath estimate from 200k observed symbols: {estimate:.6f}")
print(f"exact window-7 bracket:                  [{float(b.lower):.6f}, {float(b.upper):.6f}]")
