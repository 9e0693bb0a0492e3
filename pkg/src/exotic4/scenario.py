"""Declarative construction pipelines.

A scenario is a JSON document with ordered ``steps`` that all act on one
evolving state (monodromy word, factorization, sphere configuration, SW
function, characteristic numbers) and a list of ``expectations`` checked
against the recorded step results.  Facts that the computation cannot
establish enter only through ``axiom`` steps and are listed separately in
the report; they never count as verified.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import jsonschema

from . import lattice as lat
from . import rbd, swcalc, topo, words

STEP_KINDS = (
    "word",
    "collect",
    "perturb",
    "knot-surgery",
    "axiom",
    "resolve",
    "blow-up-dp",
    "blow-up-ic",
    "extract-chain",
    "identify-cpq",
    "sw-blowdown",
    "char-apply",
    "classify",
    "fingerprint",
)

_names = {"type": "array", "items": {"type": "string"}, "minItems": 1}
_ints = {"type": "array", "items": {"type": "integer"}}


def _kind(kind: str, required: list[str], props: dict | None = None) -> dict:
    return {
        "if": {"properties": {"kind": {"const": kind}}},
        "then": {"required": required, "properties": props or {}},
    }


SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["name", "steps"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "steps": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kind"],
                "properties": {
                    "kind": {"enum": list(STEP_KINDS)},
                    "id": {"type": "string"},
                    "note": {"type": "string"},
                },
                "allOf": [
                    _kind("word", ["word"], {"word": {"type": "string"}, "equals": {"type": "string"}}),
                    _kind("perturb", ["k1"], {"k1": {"type": "integer", "minimum": 1}, "blocks": _ints,
                                              "multiplicity": {"type": "integer", "minimum": 2}}),
                    _kind("knot-surgery", ["twist"], {"twist": {"type": "integer", "minimum": 1},
                                                      "count": {"type": "integer", "minimum": 1}}),
                    _kind("axiom", ["id", "cite", "fact"], {
                        "cite": {"type": "string", "minLength": 1},
                        "fact": {"type": "string", "minLength": 1},
                        "effect": {"type": "object", "required": ["type"],
                                   "properties": {"type": {"enum": ["pseudo-section", "simply-connected", "rational-ball"]}}},
                    }),
                    _kind("resolve", ["spheres"], {"spheres": {**_names, "minItems": 2, "maxItems": 2},
                                                   "into": {"type": "string"},
                                                   "intersections": {"type": "integer", "minimum": 1}}),
                    _kind("blow-up-dp", ["sphere"], {"sphere": {"type": "string"},
                                                     "count": {"type": "integer", "minimum": 1},
                                                     "pair_with": {"type": "object", "additionalProperties": {"type": "integer"}}}),
                    _kind("blow-up-ic", ["at"], {"at": {**_names, "minItems": 2, "maxItems": 2},
                                                 "follow": {"type": "array", "items": {"type": "string"}},
                                                 "count": {"type": "integer", "minimum": 1},
                                                 "start": {"type": "string"}, "target": _ints}),
                    _kind("extract-chain", [], {"spheres": _names, "start": {"type": "string"}, "coefficients": _ints}),
                    _kind("char-apply", ["op"], {"op": {"enum": ["elliptic", "knot-surgery", "blow-up", "rational-blowdown"]},
                                                 "n": {"type": "integer", "minimum": 1},
                                                 "count": {"type": "integer", "minimum": 1},
                                                 "k": {"type": "integer", "minimum": 1}}),
                ],
            },
        },
        "expectations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["path", "equals"],
                "additionalProperties": False,
                "properties": {"path": {"type": "string"}, "equals": {}},
            },
        },
    },
}


class ScenarioError(ValueError):
    """Schema violation; maps to exit code 2."""


class StepError(RuntimeError):
    def __init__(self, index: int, kind: str, message: str):
        super().__init__(f"step {index} ({kind}): {message}")
        self.index = index
        self.kind = kind
        self.message = message


@dataclass
class Scenario:
    name: str
    steps: list[dict]
    expectations: list[dict] = field(default_factory=list)
    description: str = ""

    @classmethod
    def from_dict(cls, doc: dict) -> "Scenario":
        errors = sorted(jsonschema.Draft202012Validator(SCHEMA).iter_errors(doc), key=lambda e: list(e.path))
        if errors:
            e = errors[0]
            where = "/".join(map(str, e.path)) or "<root>"
            raise ScenarioError(f"scenario schema violation at {where}: {e.message}")
        ids = [s["id"] for s in doc["steps"] if "id" in s]
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        if dupes:
            raise ScenarioError(f"duplicate step ids {dupes}")
        return cls(doc["name"], list(doc["steps"]), list(doc.get("expectations", [])), doc.get("description", ""))

    @classmethod
    def load(cls, path: str | Path) -> "Scenario":
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{path}: not valid JSON ({exc})") from None
        return cls.from_dict(doc)


@dataclass
class State:
    word: words.Word | None = None
    factorization: words.Factorization | None = None
    spheres: dict[str, lat.ImmersedSphere] = field(default_factory=dict)
    basis: dict[str, lat.HomClass] = field(default_factory=dict)
    sw: swcalc.SWFunction | None = None
    char: topo.CharNumbers | None = None
    chain: rbd.PlumbingChain | None = None
    chain_spheres: list[str] = field(default_factory=list)
    cpq: rbd.CpqLabel | None = None
    rational_balls: set[tuple[int, int]] = field(default_factory=set)

    def sphere(self, name: str) -> lat.ImmersedSphere:
        try:
            return self.spheres[name]
        except KeyError:
            raise ValueError(f"no sphere named {name!r}; have {sorted(self.spheres)}") from None

    def lattice(self) -> lat.Lattice:
        return lat.config_lattice(list(self.spheres.values()))

    def relift(self) -> None:
        """Bring every sphere and basis class to the newest lattice."""
        big = lat.config_lattice(list(self.spheres.values()) + [lat.ImmersedSphere(c) for c in self.basis.values()])
        self.spheres = {k: s.lift(big) for k, s in self.spheres.items()}
        self.basis = {k: c.lift(big) for k, c in self.basis.items()}


def _jsonable(x: Any) -> Any:
    return json.loads(json.dumps(x, sort_keys=True))


def _class_str(cls: dict[str, int]) -> str:
    parts = []
    for v, e in cls.items():
        parts.append(("-" if e < 0 else "+") + (str(abs(e)) if abs(e) != 1 else "") + v)
    s = "".join(parts)
    return s[1:] if s.startswith("+") else s or "0"


class Runner:
    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.state = State()
        self.results: dict[str, dict] = {}
        self.axioms: list[dict] = []

    # -- steps ------------------------------------------------------------
    def step_word(self, p: dict) -> dict:
        w = words.parse_word(p["word"])
        self.state.word = w
        m = words.eval_word(w)
        out = {"word": str(w), "length": len(w), "matrix": m.rows(), "is_identity": m.is_identity()}
        if "equals" in p:
            out["equivalent"] = words.words_equivalent(w, p["equals"])
            out["equals_length"] = len(words.parse_word(p["equals"]))
        return out

    def step_collect(self, p: dict) -> dict:
        if self.state.word is None:
            raise ValueError("collect needs a preceding word step")
        f = words.collect_a_powers(self.state.word)
        self.state.factorization = f
        out = words.factorization_summary(f)
        out["matrix_preserved"] = f.matrix() == words.eval_word(self.state.word)
        out["distinct_cycles"] = len(words.distinct_cycles(f.blocks))
        return out

    def step_perturb(self, p: dict) -> dict:
        f = self._need("factorization")
        if "blocks" in p:
            targets = list(p["blocks"])
        elif "multiplicity" in p:
            targets = [i for i, b in enumerate(f.blocks) if b.multiplicity == p["multiplicity"]]
        else:
            raise ValueError("perturb needs 'blocks' or 'multiplicity'")
        before = f.matrix()
        for i in sorted(targets, reverse=True):
            f = words.perturb_Ik(f, i, p["k1"])
        self.state.factorization = f
        out = words.factorization_summary(f)
        out["matrix_preserved"] = f.matrix() == before
        out["isotopic_adjacent_pairs"] = sum(
            1 for x, y in zip(f.blocks, f.blocks[1:]) if x.cycle == y.cycle
        )
        return out

    def step_knot_surgery(self, p: dict) -> dict:
        f = self._need("factorization")
        if self.state.sw is None:
            twists = words.euler_from_twists(f)
            if twists % 12:
                raise ValueError(f"{twists} twists is not the monodromy of an elliptic surface E(n)")
            self.state.sw = swcalc.elliptic_surface_sw(twists // 12)
        delta = swcalc.alexander_twist(p["twist"])
        for _ in range(p.get("count", 1)):
            self.state.sw = swcalc.knot_surgery(self.state.sw, delta)
        sw = self.state.sw
        top = max(sw.poly.items(), key=lambda kv: kv[0])
        return {
            "alexander": delta.to_pairs(),
            "sw": sw.to_dict(),
            "top_exponent": list(top[0]),
            "top_value": top[1],
        }

    def step_axiom(self, p: dict) -> dict:
        entry = {"id": p["id"], "cite": p["cite"], "fact": p["fact"]}
        effect = p.get("effect")
        if effect:
            entry["effect"] = effect
        self.axioms.append(entry)
        if not effect:
            return {"recorded": True}
        kind = effect["type"]
        if kind == "pseudo-section":
            return self._build_configuration(effect)
        if kind == "simply-connected":
            c = self._need("char")
            self.state.char = c.replace(simply_connected=effect.get("value", "asserted"))
            return {"char": self.state.char.to_dict()}
        if kind == "rational-ball":
            label = rbd.CpqLabel(effect["p"], effect["q"])
            self.state.rational_balls.add((label.p, label.q))
            return {"p": label.p, "q": label.q, "boundary_order": label.p**2}
        raise ValueError(f"unknown axiom effect {kind!r}")

    def step_resolve(self, p: dict) -> dict:
        a, b = p["spheres"]
        s1, s2 = self.state.sphere(a), self.state.sphere(b)
        n = p.get("intersections", lat.pairing(s1.cls, s2.cls))
        into = p.get("into", a)
        s = lat.resolve_spheres(s1, s2, n, name=into)
        del self.state.spheres[a], self.state.spheres[b]
        self.state.spheres[into] = s
        return {"class": str(s.cls), "square": s.square, "double_points": s.double_points}

    def step_blow_up_dp(self, p: dict) -> dict:
        name = p["sphere"]
        s = self.state.sphere(name)
        labels = []
        for _ in range(p.get("count", 1)):
            s = lat.blow_up_double_point(s)
            labels.append(s.cls.lattice.labels[-1])
        self.state.spheres[name] = s
        for l in labels:
            self.state.basis[l] = s.cls.lattice.basis(l)
        self.state.relift()
        s = self.state.spheres[name]
        self._blow_up_sw(labels)
        out = {"labels": labels, "class": str(s.cls), "square": s.square,
               "double_points": s.double_points, "embedded": s.embedded}
        if "pair_with" in p:
            k = s.cls.lattice.zero()
            for v, c in p["pair_with"].items():
                k = k + c * self._variable_class(v)
            out["pairing"] = lat.pairing(k, s.cls)
        return out

    def step_blow_up_ic(self, p: dict) -> dict:
        names = list(self.state.spheres)
        config = tuple(self.state.spheres.values())
        i, j = (names.index(n) for n in p["at"])
        if "follow" in p:
            follow: list = list(p["follow"])
        elif "target" in p and "count" in p:
            hits = lat.search_infinitely_close(
                config, i, j, p["count"], names.index(p.get("start", names[0])), p["target"]
            )
            if not hits:
                raise ValueError(f"no sequence of {p['count']} infinitely close blow-ups realizes the target chain")
            follow = hits[0][0]
        else:
            raise ValueError("blow-up-ic needs 'follow' or both 'count' and 'target'")
        cfg, exc = lat.blow_up_at_intersection(config, i, j)
        created = [exc]
        all_names = names + [exc.name]
        pair = (i, j)
        chosen = []
        for partner in follow:
            # names of exceptional spheres only exist once they are created
            k = all_names.index(partner) if isinstance(partner, str) else partner
            if k not in pair:
                raise ValueError(f"{all_names[k]} does not pass through the newest blown-up point")
            newest = len(cfg) - 1
            cfg, exc = lat.blow_up_at_intersection(cfg, k, newest)
            created.append(exc)
            all_names.append(exc.name)
            pair = (k, newest)
            chosen.append(all_names[k])
        self.state.spheres = dict(zip(all_names, cfg))
        labels = [e.name for e in created]
        for l in labels:
            self.state.basis[l] = cfg[-1].cls.lattice.basis(l)
        self.state.relift()
        self._blow_up_sw(labels)
        touched = sorted({names[i], names[j], *chosen}) + labels
        return {
            "labels": labels,
            "follow": chosen,
            "squares": {n: self.state.spheres[n].square for n in touched},
        }

    def step_extract_chain(self, p: dict) -> dict:
        names = list(self.state.spheres)
        config = tuple(self.state.spheres.values())
        if "spheres" in p:
            order = [names.index(n) for n in p["spheres"]]
        elif "start" in p and "coefficients" in p:
            order = lat.find_linear_chain(config, names.index(p["start"]), p["coefficients"])
            if order is None:
                raise ValueError(f"no linear chain {p['coefficients']} starting at {p['start']}")
        else:
            raise ValueError("extract-chain needs 'spheres' or both 'start' and 'coefficients'")
        chain = lat.extract_linear_chain(config, order)
        self.state.chain = chain
        self.state.chain_spheres = [names[k] for k in order]
        self.state.cpq = None
        return {
            "chain": list(chain.coefficients),
            "display": str(chain),
            "length": len(chain),
            "spheres": self.state.chain_spheres,
            "abs_det": abs(rbd.chain_determinant(chain)),
        }

    def step_identify_cpq(self, p: dict) -> dict:
        chain = self._need("chain")
        label = rbd.identify_cpq(chain)
        if label is None:
            raise ValueError(f"chain {chain} is not a C_(p,q) configuration")
        self.state.cpq = label
        return {"p": label.p, "q": label.q, "negative_definite": rbd.is_negative_definite(chain)}

    def step_sw_blowdown(self, p: dict) -> dict:
        self._require_ball()
        sw = self._need("sw")
        classes = [self.state.spheres[n].cls for n in self.state.chain_spheres]
        out = swcalc.rational_blowdown_sw(sw, self.state.chain, classes, self.state.basis)
        self.state.sw = out
        survivors = [
            {"class": _class_str(dict((v, e) for v, e in zip(out.variables, exps) if e)), "value": c}
            for exps, c in out.terms()
        ] if out.basic_class_count <= 64 else []
        return {
            "basic_classes": out.basic_class_count,
            "before": sw.basic_class_count,
            "classes": survivors,
            "values": sorted({c for _, c in out.poly.items()}),
            "conjugation_sign": out.conjugation_sign,
        }

    def step_char_apply(self, p: dict) -> dict:
        op = p["op"]
        if op == "elliptic":
            self.state.char = topo.elliptic_surface_numbers(p["n"])
        else:
            c = self._need("char")
            if op == "knot-surgery":
                for _ in range(p.get("count", 1)):
                    c = topo.apply_knot_surgery(c)
            elif op == "blow-up":
                c = topo.apply_blow_up(c, p.get("k", 1))
            elif op == "rational-blowdown":
                self._require_ball()
                c = topo.apply_rational_blowdown(c, rbd.blow_down_char_effect(self.state.chain))
            self.state.char = c
        out = self.state.char.to_dict()
        if self.state.factorization is not None and op == "elliptic":
            out["euler_from_twists"] = words.euler_from_twists(self.state.factorization)
        return out

    def step_classify(self, p: dict) -> dict:
        c = self._need("char")
        return {"classification": topo.freedman_classify(c), "simply_connected": c.simply_connected}

    def step_fingerprint(self, p: dict) -> dict:
        return {"fingerprint": list(swcalc.fingerprint(self._need("sw")))}

    # -- helpers ----------------------------------------------------------
    def _need(self, attr: str):
        val = getattr(self.state, attr)
        if val is None:
            raise ValueError(f"no {attr} in the pipeline state yet")
        return val

    def _require_ball(self) -> None:
        self._need("chain")
        if self.state.cpq is None:
            raise ValueError("run identify-cpq before blowing down")
        key = (self.state.cpq.p, self.state.cpq.q)
        if key not in self.state.rational_balls:
            raise ValueError(f"no rational-ball axiom for B_{key}; the blow-down is not justified")

    def _variable_class(self, v: str) -> lat.HomClass:
        if v not in self.state.basis:
            raise ValueError(f"unknown class variable {v!r}")
        return self.state.basis[v]

    def _blow_up_sw(self, labels: list[str]) -> None:
        if self.state.sw is not None:
            self.state.sw = swcalc.blow_up_sw(self.state.sw, len(labels), labels)

    def _build_configuration(self, effect: dict) -> dict:
        """Spheres of the I_k fiber, the fishtail fibers and the declared pseudo-section.

        The I_k fiber (k = a_power) is a cycle of k (-2)-spheres Sigma0..;
        each fishtail block gives a sphere ``F<block number>`` in the fiber
        class with one double point; the pseudo-section S has the declared
        square and double points and meets Sigma<meets> once.
        """
        f = self._need("factorization")
        k = f.a_power
        if k < 2:
            raise ValueError("the factorization has no I_k fiber with k >= 2")
        name = effect.get("name", "S")
        sig = [f"Sigma{i}" for i in range(k)]
        meets = effect.get("meets", "Sigma0")
        squares = {name: effect["square"], **{s: -2 for s in sig}}
        pairs = {(sig[i], sig[(i + 1) % k]): 1 for i in range(k)} if k > 2 else {(sig[0], sig[1]): 2}
        pairs[(name, meets)] = 1
        L = lat.Lattice.from_pairings([name] + sig, squares, pairs)
        t = L.element({s: 1 for s in sig})
        spheres = {name: lat.ImmersedSphere(L.basis(name), effect["double_points"], name)}
        spheres.update({s: lat.ImmersedSphere(L.basis(s), 0, s) for s in sig})
        fishtails = []
        for idx, blk in enumerate(f.blocks, start=1):
            if blk.multiplicity == 1:
                fishtails.append(f"F{idx}")
                spheres[f"F{idx}"] = lat.ImmersedSphere(t, 1, f"F{idx}")
        self.state.spheres = spheres
        self.state.basis["T"] = t
        return {
            "fiber_components": k,
            "fishtails": fishtails,
            "fishtail_cycles": {f"F{i}": [b.cycle.p, b.cycle.q] for i, b in enumerate(f.blocks, start=1) if b.multiplicity == 1},
            "section_square": spheres[name].square,
            "section_double_points": effect["double_points"],
            "fiber_square": t.square,
            "section_dot_fiber": lat.pairing(spheres[name].cls, t),
        }

    # -- driver -----------------------------------------------------------
    def run(self) -> dict:
        steps_out = []
        error = None
        for index, step in enumerate(self.scenario.steps):
            kind = step["kind"]
            sid = step.get("id", f"{index}:{kind}")
            handler = getattr(self, "step_" + kind.replace("-", "_"))
            params = {k: v for k, v in step.items() if k not in ("kind", "note")}
            try:
                res = _jsonable(handler(params))
            except Exception as exc:  # noqa: BLE001 - reported with the step index
                error = StepError(index, kind, str(exc))
                steps_out.append({"index": index, "id": sid, "kind": kind, "status": "error", "error": str(exc)})
                break
            self.results[sid] = res
            steps_out.append({"index": index, "id": sid, "kind": kind, "status": "ok", "results": res})

        checks = []
        for exp in self.scenario.expectations:
            actual, found = _lookup(self.results, exp["path"])
            expected = _jsonable(exp["equals"])
            checks.append({
                "path": exp["path"],
                "expected": expected,
                "actual": actual if found else None,
                "pass": found and actual == expected,
            })
        verdict = "pass" if error is None and all(c["pass"] for c in checks) else "fail"
        report = {
            "scenario": self.scenario.name,
            "steps": steps_out,
            "expectations": checks,
            "axioms": list(self.axioms),
            "verdict": verdict,
        }
        if error is not None:
            report["error"] = {"step": error.index, "kind": error.kind, "message": error.message}
        if self.state.char is not None:
            report["final_char"] = self.state.char.to_dict()
        return report


def _lookup(results: dict, path: str) -> tuple[Any, bool]:
    head, _, rest = path.partition(".")
    if head not in results:
        return None, False
    cur: Any = results[head]
    for part in rest.split(".") if rest else []:
        if isinstance(cur, dict) and part in cur:
            cur = cur[part]
        elif isinstance(cur, list) and part.lstrip("-").isdigit() and -len(cur) <= int(part) < len(cur):
            cur = cur[int(part)]
        else:
            return None, False
    return cur, True


def run_scenario(s: Scenario | dict | str | Path) -> dict:
    if isinstance(s, dict):
        s = Scenario.from_dict(s)
    elif isinstance(s, (str, Path)):
        s = Scenario.load(s)
    return Runner(s).run()


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def report_text(report: dict) -> str:
    lines = [f"scenario: {report['scenario']}"]
    for st in report["steps"]:
        if st["status"] == "ok":
            lines.append(f"  [{st['index']:>2}] {st['kind']:<14} {st['id']}: {_summary(st['results'])}")
        else:
            lines.append(f"  [{st['index']:>2}] {st['kind']:<14} ERROR: {st['error']}")
    if report["axioms"]:
        lines.append("axioms (asserted, not computed):")
        for ax in report["axioms"]:
            lines.append(f"  - {ax['id']}: {ax['fact']}  [{ax['cite']}]")
    if report["expectations"]:
        lines.append("expectations:")
        for c in report["expectations"]:
            mark = "PASS" if c["pass"] else "FAIL"
            lines.append(f"  {mark} {c['path']} = {json.dumps(c['actual'], ensure_ascii=False)}"
                         + ("" if c["pass"] else f" (expected {json.dumps(c['expected'], ensure_ascii=False)})"))
    if "final_char" in report:
        ch = report["final_char"]
        lines.append(
            "final numbers: e={e} sigma={sigma} b1={b1} b2+={b2_plus} b2-={b2_minus} {parity}, "
            "simply connected: {simply_connected}".format(**ch)
        )
    lines.append(f"verdict: {report['verdict'].upper()}")
    return "\n".join(lines) + "\n"


_SUMMARY_KEYS = ("display", "fibers", "square", "double_points", "classification", "fingerprint",
                 "values", "basic_classes", "p", "q", "e", "sigma", "equivalent", "is_identity", "labels", "pairing")


def _summary(res: dict) -> str:
    parts = []
    for k in _SUMMARY_KEYS:
        if k in res:
            v = res[k]
            if isinstance(v, list) and len(v) > 8:
                v = f"[{v[0]} .. {v[-1]}] ({len(v)})"
            parts.append(f"{k}={v}")
    return ", ".join(parts) or "ok"
