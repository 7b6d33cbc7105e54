"""How much k-wise independence does it take to fool sign(x1*x2) and a random regular quadratic?"""

from momentlearn.duality import fool_ptf
from momentlearn.cli import parse_polynomial

n = 6
for text in ("x1*x2", "0.3 + x1 - 0.5*x2 + 0.8*x3 + 0.2*x1*x4 - 0.1*x5*x6"):
    p = parse_polynomial(text, n)
    print(text)
    for k in (1, 2, 3):
        print(f"  k={k}  worst gap {fool_ptf(p, n, k):.4f}")
