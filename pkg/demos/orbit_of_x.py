"""Walk the Vershik orbit of the minimal path x and show which collared
letter sits at the origin, next to the Ω-window it decodes to."""

from adicamata.cli import orbit_rows

for row in orbit_rows("(0_d0_e)@e", 12, depth=3):
    print(f"{row['n']:>3}  {row['start']}  {row['window']:<26} {row['path']}")
