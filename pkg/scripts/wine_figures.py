"""Write 2-D and 3-D coefficient scatters of the Wine data (CSV + SVG) to a directory."""
import sys
from pathlib import Path

from globalsnmf.cli import main

out = Path(sys.argv[1] if len(sys.argv) > 1 else "figures")
out.mkdir(parents=True, exist_ok=True)
for k in (2, 3):
    main(["coords", "--dataset", "wine", "-k", str(k),
          "--out", str(out / f"wine_k{k}.csv"), "--svg", str(out / f"wine_k{k}.svg")])
print(f"wrote {out}/wine_k2.* and {out}/wine_k3.*")
