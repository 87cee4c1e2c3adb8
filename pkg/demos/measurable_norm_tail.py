"""Tail mass of the weighted norm |h|^2 = sum <e_n, h>^2 / n^2.

Standard Gaussian mass on the span of basis directions N+1 .. N+k escapes
an eps-ball with probability at most (sum n^-2) / eps^2, and that bound
collapses as N grows. This shrinking tail is what makes the weighted norm
a usable completion norm while the plain Hilbert norm is not: under the
plain norm the escape probability would not decay at all.
"""

from gaussradon import tail_mass

print(f"{'N':>6} {'k':>3} {'eps':>6} {'estimate':>10} {'std err':>9} {'Markov bound':>13}")
for N in (1, 4, 16, 64, 256, 1024):
    report = tail_mass(N, 10, 0.1, samples=200_000, seed=31)
    print(f"{report.N:>6} {report.k:>3} {report.epsilon:>6.2f} "
          f"{report.estimate:>10.5f} {report.std_error:>9.5f} {report.markov_bound:>13.5f}")

print()
print("same span, growing ball: the escape probability is antitone in eps")
for eps in (0.2, 0.4, 0.8, 1.6):
    report = tail_mass(1, 10, eps, samples=200_000, seed=31)
    print(f"  eps = {eps:4.1f}   estimate {report.estimate:.5f}   bound {report.markov_bound:.5f}")
