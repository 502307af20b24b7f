"""Reading and writing models, Kripke models, proofs and verdicts.

Files are YAML documents (JSON being a subset of YAML),
except proofs, which may also be given as JSON lines, one proof line per row.
Formulae are written in the concrete grammar of `formula`.
"""

import json
import logging
import pathlib
from typing import Optional

import numpy as np
import yaml

from . import base
from . import formula
from . import truth_algebra
from . import content_algebra
from . import ge_model
from . import kripke
from . import calculus
from . import exceptions

SCHEMA_VERSION = 1


def _is_file(source) -> bool:
    if isinstance(source, pathlib.Path):
        return True
    if not isinstance(source, str) or "\n" in source:
        return False
    try:
        return pathlib.Path(source).is_file()
    except OSError:
        return False


def read_text(source) -> str:
    """The content of a file, or the text itself if it is not an existing path."""
    if _is_file(source):
        try:
            with open(source) as fd:
                return fd.read()
        except OSError as e:
            raise exceptions.ModelFileError(f"Cannot read `{source}`: {e}") from e
    return str(source)


def load_document(source, exception = exceptions.ModelFileError):
    """Parse a YAML (or JSON) document."""
    text = read_text(source)
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as e:
        msg = f"Cannot parse document: {e}"
        logging.error(msg)
        raise exception(msg) from e


def dump(data, fmt: str = "json") -> str:
    if fmt == "yaml":
        return yaml.safe_dump(data, sort_keys=False, allow_unicode=True)
    return json.dumps(data, indent=2, ensure_ascii=False)


class Parser(base.ErrorManager):
    """Base class of the file parsers, reading a configuration dictionary.

    Keys have synonyms, so that `truth` and `truth_algebra` are interchangeable, for instance.
    """

    exception = exceptions.ModelFileError

    def __init__(self, config: dict, raise_errors = True):
        super().__init__(raise_errors)
        if not isinstance(config, dict):
            self.error(f"Expected a mapping, not a {type(config).__name__}.", exception = self.exception)
        self.config = config

    def get(self, keys, pconfig = None, default = None):
        """The item of the first key found, or the default."""
        if pconfig is None:
            pconfig = self.config
        for k in keys:
            if k in pconfig:
                return pconfig[k]
        return default

    def need(self, keys, pconfig = None, section = None):
        value = self.get(keys, pconfig)
        if value is None:
            self.error(f"Missing field `{keys[0]}`.", section = section, exception = self.exception)
        return value


##########################################################################
# Algebras.
##########################################################################

def frame_from_dict(d: dict, errors: Optional[base.ErrorManager] = None) -> truth_algebra.PreorderFrame:
    """A frame given by `reach` (its full matrix) or by `edges` (closed reflexively and transitively)."""
    errors = errors or base.ErrorManager()
    worlds = d.get("worlds")
    if "reach" in d:
        try:
            return truth_algebra.PreorderFrame(d["reach"], worlds)
        except (ValueError, TypeError) as e:
            errors.error(f"Malformed reach matrix: {e}", section = "frame", exception = exceptions.ModelFileError)
    if "edges" in d and worlds:
        index = {w: i for i, w in enumerate(worlds)}
        R = np.eye(len(worlds), dtype=bool)
        for n, edge in enumerate(d["edges"]):
            if len(edge) != 2 or any(w not in index for w in edge):
                errors.error(f"Invalid edge `{edge}` (worlds: {worlds}).", section = "frame.edges", index = n, exception = exceptions.ModelFileError)
            R[index[edge[0]], index[edge[1]]] = True
        while True:
            closed = R | ((R.astype(int) @ R.astype(int)) > 0)
            if (closed == R).all():
                break
            R = closed
        return truth_algebra.PreorderFrame(R, worlds)
    errors.error("A frame needs either `reach`, or `worlds` and `edges`.", section = "frame", exception = exceptions.ModelFileError)


def truth_from_dict(d: dict, errors: Optional[base.ErrorManager] = None) -> truth_algebra.TruthAlgebra:
    """A truth algebra from explicit tables, or one of the shorthands:
    `frame` (complex algebra), `powerset` (list of atoms), `boolean` (number of worlds), `discrete`.
    """
    errors = errors or base.ErrorManager()
    if not isinstance(d, dict):
        errors.error("The truth algebra must be a mapping.", section = "truth", exception = exceptions.ModelFileError)
    if "frame" in d:
        return truth_algebra.complex_algebra(frame_from_dict(d["frame"], errors))
    if "reach" in d:
        return truth_algebra.complex_algebra(frame_from_dict(d, errors))
    if "powerset" in d:
        return truth_algebra.powerset_algebra(d["powerset"])
    if "boolean" in d:
        return truth_algebra.boolean_algebra(int(d["boolean"]))
    if "discrete" in d:
        return truth_algebra.discrete_algebra(int(d["discrete"]))
    for key in ("join", "meet", "not", "zero", "one"):
        if key not in d:
            errors.error(f"Missing table `{key}`.", section = "truth", exception = exceptions.ModelFileError)
    return truth_algebra.TruthAlgebra.from_tables(d["join"], d["meet"], d["not"], d["zero"], d["one"], d.get("box"), errors)


def content_from_dict(d: dict, errors: Optional[base.ErrorManager] = None) -> content_algebra.ContentAlgebra:
    """A content algebra from an explicit `join` table (and optional `gru`),
    or the shorthands `chain` (size) and `powerset` (reference set)."""
    errors = errors or base.ErrorManager()
    if not isinstance(d, dict):
        errors.error("The content algebra must be a mapping.", section = "content", exception = exceptions.ModelFileError)
    gru = d.get("gru")
    if "chain" in d:
        B = content_algebra.chain(int(d["chain"]))
    elif "powerset" in d:
        B = content_algebra.powerset_semilattice(d["powerset"])
    elif "join" in d:
        return content_algebra.ContentAlgebra.from_tables(d["join"], gru, errors)
    else:
        errors.error("A content algebra needs `join`, `chain` or `powerset`.", section = "content", exception = exceptions.ModelFileError)
    if gru is not None:
        B = content_algebra.ContentAlgebra.from_tables(B.join, gru, errors)
    return B


def _element(algebra, x, what, errors):
    """An element given as an id, or as a list of labels for powerset algebras."""
    if isinstance(x, list):
        if algebra.labels is None:
            errors.error(f"The {what} is a set but the algebra has no labels.", exception = exceptions.ModelFileError)
        if isinstance(algebra, truth_algebra.TruthAlgebra):
            return algebra.from_set(x)
        mask = 0
        for m in x:
            if str(m) not in algebra.labels:
                errors.error(f"`{m}` in the {what} is not one of {algebra.labels}.", exception = exceptions.AssignmentError)
            mask |= 1 << algebra.labels.index(str(m))
        return mask
    return algebra.check(x, what)


##########################################################################
# Models.
##########################################################################

class ModelParser(Parser):
    """Read a gE-model:

    .. code-block:: yaml

        schema_version: 1
        variant: PAI
        truth:
            frame: {worlds: [a, b], edges: [[a, b]]}
        content:
            chain: 2
        values: {p: [b], q: 1}
        contents: {p: 0, q: 1}
    """

    def __call__(self) -> ge_model.GEModel:
        version = self.get(["schema_version"], default = SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            self.error(f"Unsupported schema version {version}.", exception = self.exception)
        variant = self.need(["variant", "logic"])
        if variant not in ge_model.LogicVariant:
            self.error(f"Unknown logic `{variant}` (known: {', '.join(v.value for v in ge_model.LogicVariant)}).", section = "variant", exception = self.exception)
        A = truth_from_dict(self.need(["truth", "truth_algebra"]), self)
        B = content_from_dict(self.need(["content", "content_algebra"]), self)
        values = self.need(["values", "atom_value", "v"])
        contents = self.need(["contents", "atom_content", "s"])
        v = {str(p): _element(A, x, f"truth value of `{p}`", self) for p, x in values.items()}
        s = {str(p): _element(B, x, f"content of `{p}`", self) for p, x in contents.items()}
        logging.debug(f"Loaded a {variant} model: {A.size} truth values, {B.size} contents, atoms {sorted(v)}")
        return ge_model.GEModel(A, B, variant, v, s)


def model_to_dict(M: ge_model.GEModel) -> dict:
    d = {
        "schema_version": SCHEMA_VERSION,
        "variant": M.variant.value,
        "truth": M.truth.to_dict(),
        "content": M.content.to_dict(),
        "values": dict(M.atom_value),
        "contents": dict(M.atom_content),
    }
    if M.truth.frame is not None:
        d["frame"] = M.truth.frame.to_dict()
        d["values_as_sets"] = {p: M.truth.as_set(x) for p, x in M.atom_value.items()}
    if not d["truth"]["box"]:
        del d["truth"]["box"]
    if d["content"]["gru"] is None:
        del d["content"]["gru"]
    return d


def load_model(source) -> ge_model.GEModel:
    return ModelParser(load_document(source))()


class KripkeParser(Parser):
    """Read a topic-augmented Kripke model:

    .. code-block:: yaml

        flavor: fine
        frame: {worlds: [a, b], edges: [[a, b]]}
        algebras: [{chain: 2}, {chain: 1}]
        topics: {a: {p: 0, q: 1}, b: {p: 0, q: 0}}
        val: {p: [b], q: [b]}
        homs: {"a->b": [0, 0]}

    `algebras` may also be a single algebra shared by every world.
    """

    exception = exceptions.KripkeModelError

    def __call__(self) -> kripke.TopicKripkeModel:
        flavor = self.get(["flavor"], default = kripke.Flavor.fine.value)
        if flavor not in kripke.Flavor:
            self.error(f"Unknown flavor `{flavor}`.", section = "flavor", exception = exceptions.ModelFileError)
        frame = frame_from_dict(self.need(["frame"]), self)
        worlds = frame.worlds

        algebras = self.need(["algebras", "topic_algebras"])
        if isinstance(algebras, dict):
            algebras = [algebras] * frame.size
        if len(algebras) != frame.size:
            self.error(f"Expected {frame.size} topic algebras, got {len(algebras)}.", section = "algebras", exception = exceptions.ModelFileError)
        topics = [content_from_dict(a, self) for a in algebras]

        assignment = self.need(["topics", "topic_of"])
        if isinstance(assignment, dict):
            missing = set(worlds) - set(assignment)
            if missing:
                self.error(f"No topics for worlds {sorted(missing)}.", section = "topics", exception = exceptions.ModelFileError)
            assignment = [assignment[w] for w in worlds]
        topic_of = [{str(p): int(t) for p, t in a.items()} for a in assignment]

        val = {}
        for p, ws in self.get(["val", "valuation"], default = {}).items():
            val[str(p)] = [frame.index(w) for w in ws]

        homs = None
        if self.get(["homs"]) is not None:
            homs = {}
            for key, h in self.get(["homs"]).items():
                if "->" not in key:
                    self.error(f"A homomorphism is keyed `w->v`, not `{key}`.", section = "homs", exception = exceptions.ModelFileError)
                w, v = (x.strip() for x in key.split("->"))
                homs[(frame.index(w), frame.index(v))] = [int(x) for x in h]
        return kripke.TopicKripkeModel(frame, topics, topic_of, val, flavor, homs)


def kripke_to_dict(M: kripke.TopicKripkeModel) -> dict:
    worlds = M.frame.worlds
    d = {
        "flavor": M.flavor.value,
        "frame": M.frame.to_dict(),
        "algebras": [T.to_dict() for T in M.topics],
        "topics": {w: dict(t) for w, t in zip(worlds, M.topic_of)},
        "val": {p: [worlds[w] for w in sorted(ws)] for p, ws in M.val.items()},
    }
    if M.homs:
        d["homs"] = {f"{worlds[a]}->{worlds[b]}": list(h) for (a, b), h in M.homs.items()}
    return d


def load_kripke(source) -> kripke.TopicKripkeModel:
    return KripkeParser(load_document(source))()


##########################################################################
# Proofs.
##########################################################################

class ProofParser(Parser):
    """Read a proof for a given calculus.

    Either a document with `premises`, an optional `goal` and `lines`,
    or a list of line objects (as read from JSON lines), the premises then being the premise lines.
    A line reads `{"formula": "p -> q", "just": {"kind": "mp", "args": [1, 2]}}`;
    axiom lines name their schema and may bind its metavariables:
    `{"kind": "axiom", "name": "A1", "binding": {"A": "p"}}`.
    """

    exception = exceptions.ProofFileError

    def __init__(self, config, calc, raise_errors = True):
        if isinstance(config, list):
            config = {"lines": config}
        super().__init__(config, raise_errors)
        self.calculus = calculus.calculus(calc)

    def formula(self, text, section, index = None):
        if not isinstance(text, str):
            self.error(f"A formula must be a string, not `{text}`.", section = section, index = index, exception = self.exception)
        return formula.parse(text, self.calculus.language_mode, self.calculus.precedence)

    def justification(self, d, n) -> calculus.Justification:
        if isinstance(d, str):
            d = {"kind": d}
        if not isinstance(d, dict):
            self.error(f"Invalid justification `{d}`.", section = "lines", index = n, exception = self.exception)
        kind = self.get(["kind", "rule"], d)
        if kind not in calculus.Kind:
            self.error(f"Unknown justification `{kind}` (known: {', '.join(k.value for k in calculus.Kind)}).", section = "lines", index = n, exception = self.exception)
        kind = calculus.Kind(kind)
        args = self.get(["args", "lines"], d, default = [])
        if not isinstance(args, list):
            args = [args]
        name = self.get(["name", "axiom"], d)
        binding = self.get(["binding"], d)
        if binding is not None:
            binding = {str(m): self.formula(f, "lines", n) for m, f in binding.items()}
        if kind == calculus.Kind.axiom and name is None:
            self.error("An axiom line must name its schema.", section = "lines", index = n, exception = self.exception)
        return calculus.Justification(kind, tuple(args), None if name is None else str(name), binding)

    def __call__(self) -> calculus.Proof:
        rows = self.need(["lines", "proof"])
        if not isinstance(rows, list):
            self.error("The proof lines must be a list.", section = "lines", exception = self.exception)
        lines = []
        for n, row in enumerate(rows, start = 1):
            if not isinstance(row, dict):
                self.error(f"Invalid line `{row}`.", section = "lines", index = n, exception = self.exception)
            phi = self.formula(self.need(["formula", "line"], row, "lines"), "lines", n)
            just = self.justification(self.need(["just", "justification", "by"], row, "lines"), n)
            lines.append(calculus.Line(phi, just))
        premises = self.get(["premises"])
        if premises is None:
            premises = [l.formula for l in lines if l.justification.kind == calculus.Kind.premise]
        else:
            premises = [self.formula(p, "premises", i) for i, p in enumerate(premises, start = 1)]
        goal = self.get(["goal"])
        if goal is not None:
            goal = self.formula(goal, "goal")
        logging.debug(f"Loaded a proof of {len(lines)} lines for {self.calculus.name}")
        return calculus.Proof(lines, premises, goal)


def read_proof_rows(source):
    """A proof document, or the list of rows of a JSON lines file."""
    text = read_text(source)
    rows = [r for r in text.splitlines() if r.strip()]
    if len(rows) > 1 and all(r.lstrip().startswith("{") and r.rstrip().endswith("}") for r in rows):
        try:
            return [json.loads(r) for r in rows]
        except json.JSONDecodeError as e:
            logging.debug(f"Not JSON lines ({e}), reading as a document.")
    return load_document(text, exceptions.ProofFileError)


def load_proof(source, calc) -> calculus.Proof:
    return ProofParser(read_proof_rows(source), calc)()


def proof_to_dict(proof: calculus.Proof) -> dict:
    def just(j):
        d = {"kind": j.kind.value}
        if j.args:
            d["args"] = list(j.args)
        if j.axiom is not None:
            d["name"] = j.axiom
        if j.binding:
            d["binding"] = {m: formula.to_text(f) for m, f in j.binding.items()}
        return d
    d = {
        "premises": [formula.to_text(p) for p in proof.premises],
        "lines": [{"formula": formula.to_text(l.formula), "just": just(l.justification)} for l in proof.lines],
    }
    if proof.goal is not None:
        d["goal"] = formula.to_text(proof.goal)
    return d


def proof_check_to_dict(check: calculus.ProofCheck) -> dict:
    d = {"calculus": check.calculus, "ok": check.ok}
    if not check.ok:
        d["line"] = check.rejection.line
        d["reason"] = check.rejection.reason.value
        if check.rejection.message:
            d["message"] = check.rejection.message
    return d


##########################################################################
# Verdicts.
##########################################################################

def verdict_to_dict(verdict) -> dict:
    b = verdict.bounds
    d = {
        "logic": verdict.variant.value,
        "premises": [formula.to_text(p) for p in verdict.premises],
        "goal": formula.to_text(verdict.goal),
        "valid": verdict.valid,
        "examined": verdict.examined,
        "bounds": {"max_worlds": b.max_worlds, "max_topics": b.max_topics, "dedup_iso": b.dedup_iso,
                   "shard": None if b.shard is None else f"{b.shard[0]}/{b.shard[1]}"},
    }
    if not verdict.valid:
        d["index"] = verdict.index
        d["countermodel"] = model_to_dict(verdict.countermodel)
        if verdict.witness is not None:
            d["witness"] = verdict.witness
    return d
