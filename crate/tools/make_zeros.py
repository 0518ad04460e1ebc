"""Assemble data/zeros.txt from the Riemann-Siegel output of `zerogen`.

The first HEAD ordinates are replaced by mpmath values (the asymptotic
remainder is least accurate there) and a sample of the rest is checked
against mpmath.zetazero.

    cargo run --release -p zerogen -- 100000 /tmp/zeros_rs.txt
    python3 tools/make_zeros.py /tmp/zeros_rs.txt data/zeros.txt
"""
import sys

import mpmath

HEAD = 500
SAMPLES = [501, 1000, 2000, 5000, 10000, 20000, 50000, 99999, 100000]


def main():
    src, dst = sys.argv[1], sys.argv[2]
    mpmath.mp.dps = 25
    zs = [float(line) for line in open(src) if line.strip()]
    worst = 0.0
    for n in SAMPLES:
        if n <= len(zs):
            ref = float(mpmath.zetazero(n).imag)
            worst = max(worst, abs(zs[n - 1] - ref))
            print(f"zero {n}: rs={zs[n - 1]:.12f} mp={ref:.12f}", file=sys.stderr)
    print(f"worst sampled deviation {worst:.2e}", file=sys.stderr)
    if worst > 1e-9:
        sys.exit("riemann-siegel ordinates disagree with mpmath")
    head = [mpmath.zetazero(n).imag for n in range(1, min(HEAD, len(zs)) + 1)]
    with open(dst, "w") as f:
        f.write(f"# ordinates of the first {len(zs)} nontrivial zeta zeros\n")
        f.write(f"# 1..{len(head)}: mpmath.zetazero; rest: Riemann-Siegel (crates/zerogen)\n")
        for z in head:
            f.write(mpmath.nstr(z, 18, strip_zeros=False) + "\n")
        for z in zs[len(head):]:
            f.write(f"{z:.12f}\n")


if __name__ == "__main__":
    main()
