"""
A moving square through the projected SVD
=========================================

Static background, bright square drifting one pixel per frame. The DCT and
data-dependent bases concentrate the time axis into a few coefficients; the
identity basis just drops frames.
"""

from projprod import SyntheticSpec, gen_moving_square, sweep_tsvdq
from projprod.sweep import gnuplot_script
from projprod.data_io import write_reports

A = gen_moving_square(SyntheticSpec("moving-square", (24, 24, 30), seed=1, velocity=(1, 1), square_size=6))
print("frames:", A.shape[2], " background 0.2, square 1.0")

kinds = ["identity", "dct", "data"]
ks = [1, 2, 4, 8]
ps = [1, 3, 6, 10, 30]
rows = sweep_tsvdq(A, kinds, ks, ps)

for kind in kinds:
    print(f"\n{kind}: RE by p (rows) and k (columns)")
    print("  p " + "".join(f"   k={k:<4d}" for k in ks))
    for p in ps:
        vals = [r.relative_error for r in rows if r.transform == kind and r.p == p]
        print(f" {p:2d} " + "".join(f"  {v:7.4f}" for v in vals))

# CSV plus a gnuplot script, if you want a figure
write_reports("moving_square_sweep.csv", rows, append=False)
with open("moving_square_sweep.gp", "w") as fh:
    fh.write(gnuplot_script("moving_square_sweep.csv", kinds, ks, "moving_square_sweep.png"))
print("\nwrote moving_square_sweep.csv and moving_square_sweep.gp")
