"""Regenerate the bundled scenario files in scenarios/.

    python scripts/build_scenarios.py

The 17-step blow-up pattern in the b2- = 8 pipeline is the one returned
by scripts/find_blowup_sequence.py.
"""

import json
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "scenarios"

PROP_WORD = "a4ba2b2a2b2a4ba2b2a2"
FIBERS = ["I16", "I1", "I2", "I2", "I1", "I2"]
CHAIN_305 = [-18, -19] + [-2] * 14 + [-3] + [-2] * 16

AX_PI1_Z = {
    "kind": "axiom",
    "id": "pi1-Z",
    "cite": "knot surgery along fibers of an elliptic fibration whose complement has fishtails with nonisotopic vanishing cycles (Fintushel-Stern)",
    "fact": "the knot-surgered K3 surface Z is simply connected",
    "effect": {"type": "simply-connected", "value": "asserted"},
}
AX_PSEUDO = {
    "kind": "axiom",
    "id": "pseudo-section",
    "cite": "double node neighborhoods of the three fishtail pairs (Fintushel-Stern)",
    "fact": "Z contains an immersed sphere S of square -2 with 3 positive double points, meeting each fiber once and the I16 fiber in its component Sigma0",
    "effect": {"type": "pseudo-section", "name": "S", "square": -2, "double_points": 3, "meets": "Sigma0"},
}


def ball(p, q):
    return {
        "kind": "axiom",
        "id": f"rational-ball-{p}-{q}",
        "cite": "Casson-Harer: the lens space L(p^2, pq-1) bounds a rational homology ball",
        "fact": f"the boundary of C_({p},{q}) bounds the rational ball B_({p},{q}) (e = 1, sigma = 0, b2 = 0)",
        "effect": {"type": "rational-ball", "p": p, "q": q},
    }


def common_prefix(n):
    """Monodromy, perturbation, surgeries, pseudo-section and the -18 sphere."""
    return [
        {"kind": "word", "id": "monodromy", "word": PROP_WORD, "equals": "(ab)^12"},
        {"kind": "collect", "id": "collect"},
        {"kind": "char-apply", "id": "k3", "op": "elliptic", "n": 2},
        {"kind": "perturb", "id": "perturb", "multiplicity": 2, "k1": 1,
         "note": "split each I2 fiber into two fishtails with isotopic vanishing cycles"},
        {"kind": "knot-surgery", "id": "surgery", "twist": n, "count": 3},
        {"kind": "char-apply", "id": "z-numbers", "op": "knot-surgery", "count": 3},
        AX_PI1_Z,
        AX_PSEUDO,
        {"kind": "resolve", "id": "resolve-1", "spheres": ["S", "F1"], "into": "S"},
        {"kind": "resolve", "id": "resolve-2", "spheres": ["S", "F6"], "into": "S"},
        {"kind": "blow-up-dp", "id": "blow-up", "sphere": "S", "count": 5,
         "pair_with": {"T": 6, "E1": 1, "E2": 1, "E3": 1, "E4": 1, "E5": 1}},
        {"kind": "char-apply", "id": "blown-up-numbers", "op": "blow-up", "k": 5},
    ]


def common_expectations():
    return [
        {"path": "monodromy.equivalent", "equals": True},
        {"path": "monodromy.is_identity", "equals": True},
        {"path": "collect.fibers", "equals": FIBERS},
        {"path": "collect.twists", "equals": 24},
        {"path": "k3.e", "equals": 24},
        {"path": "k3.euler_from_twists", "equals": 24},
        {"path": "perturb.fibers", "equals": ["I16"] + ["I1"] * 8},
        {"path": "perturb.isotopic_adjacent_pairs", "equals": 3},
        {"path": "resolve-2.square", "equals": 2},
        {"path": "resolve-2.double_points", "equals": 5},
        {"path": "blow-up.square", "equals": -18},
        {"path": "blow-up.embedded", "equals": True},
        {"path": "blow-up.pairing", "equals": 16},
    ]


def x_scenario(n):
    steps = common_prefix(n) + [
        {"kind": "extract-chain", "id": "chain", "spheres": ["S"] + [f"Sigma{i}" for i in range(14)]},
        {"kind": "identify-cpq", "id": "cpq"},
        ball(16, 1),
        {"kind": "sw-blowdown", "id": "sw"},
        {"kind": "char-apply", "id": "x-numbers", "op": "rational-blowdown"},
        {
            "kind": "axiom",
            "id": "pi1-X",
            "cite": "Van Kampen: a fiber sphere next to the chain caps the generator of pi_1 of the boundary, and pi_1 of the boundary surjects onto pi_1 of the rational ball",
            "fact": "the rational blow-down X is simply connected",
            "effect": {"type": "simply-connected", "value": "asserted"},
        },
        {"kind": "classify", "id": "classify"},
        {"kind": "fingerprint", "id": "fingerprint"},
    ]
    n3 = n**3
    exp = common_expectations() + [
        {"path": "chain.display", "equals": "-18 -2 ×14"},
        {"path": "chain.abs_det", "equals": 256},
        {"path": "cpq.p", "equals": 16},
        {"path": "cpq.q", "equals": 1},
        {"path": "sw.basic_classes", "equals": 2},
        {"path": "sw.values", "equals": [n3]},
        {"path": "x-numbers.e", "equals": 14},
        {"path": "x-numbers.sigma", "equals": -6},
        {"path": "x-numbers.b2_plus", "equals": 3},
        {"path": "x-numbers.b2_minus", "equals": 9},
        {"path": "x-numbers.parity", "equals": "odd"},
        {"path": "classify.classification", "equals": "3CP² # 9CP²bar"},
        {"path": "fingerprint.fingerprint", "equals": [n3, n3]},
    ]
    return {
        "name": f"x-c16-n{n}",
        "description": f"X_{n}: rational blow-down of Z # 5 CP2bar along C_(16,1), Z = K3 with three {n}-twist knot surgeries",
        "steps": steps,
        "expectations": exp,
    }


def y_scenario(n):
    chain_spheres = (["S", "Sigma0"] + [f"Sigma{i}" for i in range(15, 1, -1)] + ["Sigma1"]
                     + [f"E{i}" for i in range(6, 22)])
    steps = common_prefix(n) + [
        {"kind": "blow-up-ic", "id": "blow-up-17", "at": ["Sigma0", "Sigma1"], "follow": ["Sigma0"] * 16,
         "note": "blow up Q = Sigma0 . Sigma1, then 16 more times where the newest exceptional curve meets Sigma0"},
        {"kind": "char-apply", "id": "blown-up-22", "op": "blow-up", "k": 17},
        {"kind": "extract-chain", "id": "chain", "spheres": chain_spheres},
        {"kind": "identify-cpq", "id": "cpq"},
        ball(305, 17),
        {"kind": "sw-blowdown", "id": "sw"},
        {"kind": "char-apply", "id": "y-numbers", "op": "rational-blowdown"},
        {
            "kind": "axiom",
            "id": "h1-Y",
            "cite": "Mayer-Vietoris: the normal circle of the pseudo-section generates H_1 of the boundary and bounds a regular fiber in the complement",
            "fact": "H_1(Y; Z) = 0; pi_1(Y) is not known",
        },
        {"kind": "classify", "id": "classify"},
        {"kind": "fingerprint", "id": "fingerprint"},
    ]
    n3 = n**3
    exp = common_expectations() + [
        {"path": "blow-up-17.squares.Sigma0", "equals": -19},
        {"path": "blow-up-17.squares.Sigma1", "equals": -3},
        {"path": "blown-up-22.e", "equals": 46},
        {"path": "blown-up-22.sigma", "equals": -38},
        {"path": "chain.chain", "equals": CHAIN_305},
        {"path": "chain.abs_det", "equals": 93025},
        {"path": "cpq.p", "equals": 305},
        {"path": "cpq.q", "equals": 17},
        {"path": "y-numbers.e", "equals": 13},
        {"path": "y-numbers.sigma", "equals": -5},
        {"path": "y-numbers.b2_plus", "equals": 3},
        {"path": "y-numbers.b2_minus", "equals": 8},
        {"path": "classify.classification", "equals": "not-applicable"},
        {"path": "sw.basic_classes", "equals": 2},
        {"path": "sw.values", "equals": [n3]},
        {"path": "fingerprint.fingerprint", "equals": [n3, n3]},
    ]
    return {
        "name": f"y-c305-n{n}",
        "description": f"Y_{n}: 17 infinitely close blow-ups on the I16 fiber, then rational blow-down along C_(305,17)",
        "steps": steps,
        "expectations": exp,
    }


def main():
    OUT.mkdir(exist_ok=True)
    docs = [x_scenario(n) for n in (1, 2, 3)] + [y_scenario(2)]
    for doc in docs:
        path = OUT / f"{doc['name']}.json"
        path.write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
