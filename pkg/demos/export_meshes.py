"""Write OBJ meshes of the stereographic images of A0 * B1, A0 * B2, A0 * B3 (and the Clifford torus)."""
import sys
from pathlib import Path

from s3circles import build, named_circle
from s3circles.product import sample_grid

out = Path(sys.argv[1] if len(sys.argv) > 1 else "meshes")
out.mkdir(exist_ok=True)
A0 = named_circle("A0")
for label, right, center in (("I", "B1", "stereo:default"), ("II", "B2", "stereo:default"),
                             ("III", "B3", "stereo:default"), ("clifford", "C", "stereo:3/5,0,0,4/5")):
    mesh = sample_grid(build(A0, named_circle(right)), 128, 128, center)
    path = out / f"{label}.obj"
    path.write_text(mesh.to_obj())
    print(f"{path}: {len(mesh.vertices)} vertices, {len(mesh.faces)} quads")
