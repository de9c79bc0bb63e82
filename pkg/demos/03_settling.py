"""The settling phenomenon: Taylor coefficients stop depending on the window.

The order-k coefficient of C_n = H_n - H_{n-1} is the same for every window
n >= ceil((k+3)/2).  That is what makes the expansions computable: a single
finite window already carries the exact coefficient of the infinite-window
entropy rate.  This script tabulates the order-k coefficient across windows
and marks where the theorem says it must have settled.
"""

from fractions import Fraction

from hmpseries import am_binary, settling_check, settling_threshold

spec = am_binary(Fraction(3, 5))

for k in (0, 2, 3, 4, 6):
    thr = settling_threshold(k)
    report = settling_check(spec, k, range(2, 9))
    print(f"order k={k} (threshold window {thr}):")
    for n, v, ok in zip(report.ns, report.values, report.settled):
        marker = "settled" if ok else "still moving"
        arrow = "  <- threshold" if n == thr else ""
        print(f"  n={n}:  {v.render():24s} {marker}{arrow}")
    print(f"  verdict: {report.verdict}\n")
