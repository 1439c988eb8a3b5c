"""Write the bundled presentations as JSON, by default to presentations/."""

import json
import os
import sys

from dgtannaka import koszul as K
from dgtannaka.coalg import coalgebra_to_json
from dgtannaka.examples import BUNDLED, bundle_to_json
from dgtannaka.gradedlinalg import QQ


def one_cogenerator() -> dict:
    """k.x with |x| = 1 and zero reduced coproduct, over one object."""
    C = K.conilpotent_coalgebra(QQ, ["*"], [("x", "*", "*", 1)], {}, {}, name="k.x")
    doc = coalgebra_to_json(C.coalg, lambda x: "e" if x == ("e", "*") else x)
    doc["grouplikes"] = {"*": "e"}
    return doc


def main(out="presentations"):
    os.makedirs(out, exist_ok=True)
    docs = {name: bundle_to_json(make()) for name, make in BUNDLED.items()}
    docs["one_arrow_square"] = bundle_to_json(BUNDLED["one_arrow"](square=True))
    docs["one_cogenerator"] = one_cogenerator()
    for name, doc in docs.items():
        with open(os.path.join(out, name + ".json"), "w") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True)
            fh.write("\n")
        print(os.path.join(out, name + ".json"))


if __name__ == "__main__":
    main(*sys.argv[1:])
