"""JSON Schemas (draft 2020-12) for every document the CLI reads or writes.

They are plain dicts so that third parties can check certificates with
any validator; finmok itself does not need one at run time.
"""

SCHEMA_VERSION = 1

_world = {"type": "string"}
_element = {"type": "integer", "minimum": 0}

FRAME = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["n", "worlds", "relations"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "n": {"type": "integer", "minimum": 1},
        "worlds": {"type": "array", "items": _world, "minItems": 1},
        "relations": {
            "type": "object",
            "patternProperties": {"^[1-9][0-9]*$": {
                "type": "array",
                "items": {"type": "array", "items": _world, "minItems": 2, "maxItems": 2},
            }},
            "additionalProperties": False,
        },
    },
}

MODEL = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["n", "worlds", "relations", "domains", "interp",
                 "domain_mode", "equality_mode"],
    "properties": {
        **FRAME["properties"],
        "domains": {"type": "object", "additionalProperties": {
            "type": "array", "items": _element}},
        "equiv": {"type": ["object", "null"], "additionalProperties": {
            "type": "array", "items": {"type": "array", "items": _element}}},
        "interp": {"type": "object", "additionalProperties": {
            "type": "object", "additionalProperties": {
                "type": "array",
                "items": {"anyOf": [_element, {"type": "array", "items": _element}]}}}},
        "domain_mode": {"enum": ["expanding", "locally_constant"]},
        "equality_mode": {"enum": ["congruence", "identity", "none"]},
    },
}

CERTIFICATE = {
    **MODEL,
    "required": MODEL["required"] + ["failing_world"],
    "properties": {**MODEL["properties"], "failing_world": _world},
}

VERDICT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "status", "certified", "bound_used"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "status": {"enum": ["valid", "countermodel", "unknown"]},
        "certified": {"type": "boolean"},
        "bound_used": {"type": "integer", "minimum": 1},
        "method": {"enum": ["enumeration", "sat"]},
        "models_checked": {"type": "integer", "minimum": 0},
        "budget_exhausted": {"type": "integer"},
        "certificate": CERTIFICATE,
    },
    "if": {"properties": {"status": {"const": "countermodel"}}},
    "then": {"required": ["certificate"]},
}

CLASS_VERDICT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "status", "budget", "frames_checked"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "status": {"enum": ["countermodel", "unknown"]},
        "budget": {"type": "object", "required": ["max_worlds", "max_size"]},
        "frames_checked": {"type": "integer", "minimum": 0},
        "frame": FRAME,
        "certificate": CERTIFICATE,
    },
    "if": {"properties": {"status": {"const": "countermodel"}}},
    "then": {"required": ["frame", "certificate"]},
}

_formula = {"type": "object", "required": ["op"]}

PARSE = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "formula", "ast", "signature", "metrics"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "formula": {"type": "string"},
        "ast": _formula,
        "signature": {"enum": ["monadic_with_equality", "monadic_without_equality",
                               "non_monadic"]},
        "metrics": {"type": "object", "required": [
            "letters", "variables", "modal_depth", "quantifier_rank", "modal_indices_used"]},
    },
}

CHECK = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "result", "failing_world"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "result": {"type": "boolean"},
        "failing_world": {"type": ["string", "null"]},
    },
}

VALIDATION = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "valid", "violations"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "valid": {"type": "boolean"},
        "violations": {"type": "array", "items": {
            "type": "object", "required": ["condition", "where", "message"]}},
    },
}

CORPUS_REPORT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "total", "passed", "failed", "first_mismatch", "results"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "total": {"type": "integer", "minimum": 0},
        "passed": {"type": "integer", "minimum": 0},
        "failed": {"type": "integer", "minimum": 0},
        "first_mismatch": {"type": ["object", "null"]},
        "results": {"type": "array", "items": {
            "type": "object", "required": ["name", "expected", "got", "ok"]}},
    },
}

CORPUS = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["entries"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "entries": {"type": "array", "items": {
            "type": "object",
            "required": ["formula", "expect"],
            "properties": {
                "name": {"type": "string"},
                "formula": {"type": "string"},
                "expect": {"enum": ["valid", "countermodel", "unknown"]},
                "procedure": {"enum": ["decide", "refute", "class"]},
                "n": {"type": "integer", "minimum": 1},
                "frame": FRAME,
                "class": {"type": "string"},
                "domains": {"enum": ["expanding", "constant", "locally_constant"]},
                "equality": {"enum": ["congruence", "identity", "none"]},
                "max_size": {"type": "integer", "minimum": 1},
                "max_worlds": {"type": "integer", "minimum": 1},
                "bound": {"type": "integer", "minimum": 1},
            },
        }},
    },
}

BY_COMMAND = {
    "parse": PARSE,
    "check": CHECK,
    "validate": VALIDATION,
    "decide": VERDICT,
    "class-search": CLASS_VERDICT,
    "corpus": CORPUS_REPORT,
}
