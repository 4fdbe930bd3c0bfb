"""Regenerate cases.f64 and cases_sign.json (oracle-labelled sign regression set)."""

import json
from pathlib import Path

from rsum.datasets import write_dataset
from rsum.generators import IllCondSpec, make_ill_conditioned
from rsum.oracle import exact_sign

HERE = Path(__file__).parent

if __name__ == "__main__":
    values = make_ill_conditioned(IllCondSpec(97, 1e25, seed=7))
    write_dataset(HERE / "cases.f64", values)
    sets = []
    for seed in range(40):
        a = make_ill_conditioned(IllCondSpec(3 + seed % 30, 10.0 ** (seed % 28), seed))
        sets.append({"values": [v.hex() for v in a.tolist()], "sign": exact_sign(a)})
    doc = {"cases.f64": exact_sign(values), "sets": sets}
    (HERE / "cases_sign.json").write_text(json.dumps(doc, indent=1) + "\n")
