"""JSON Schemas (draft 2020-12) for every JSON document the command line emits."""

_NUM = {"type": "number"}
_NUM_OR_NULL = {"type": ["number", "null"]}

EVAL_RECORD = {
    "type": "object",
    "required": ["fn", "value"],
    "properties": {
        "fn": {"enum": ["pdf", "cdf", "survival", "hazard", "quantile", "chf", "mgf"]},
        "x": _NUM, "t": _NUM, "u": _NUM,
        "value": _NUM_OR_NULL,
        "re": _NUM, "im": _NUM,
        "error": _NUM_OR_NULL,
    },
}

EVAL_OUTPUT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["dist", "params", "records"],
    "properties": {
        "dist": {"enum": ["eep", "ee"]},
        "params": {"type": "object", "additionalProperties": _NUM},
        "records": {"type": "array", "items": EVAL_RECORD},
    },
}

MOMENT_OUTPUT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["dist", "params", "nu", "records"],
    "properties": {
        "dist": {"enum": ["eep", "ee"]},
        "params": {"type": "object", "additionalProperties": _NUM},
        "nu": _NUM,
        "records": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["method", "value", "error", "converged"],
                "properties": {
                    "method": {"enum": ["series", "double-series", "quadrature"]},
                    "value": _NUM, "error": _NUM_OR_NULL, "converged": {"type": "boolean"},
                },
            },
        },
        "max_rel_diff": _NUM,
    },
}

KS_REPORT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["n", "ks_distance", "critical_value_1pct", "pass"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "ks_distance": {"type": "number", "minimum": 0, "maximum": 1},
        "critical_value_1pct": {"type": "number", "exclusiveMinimum": 0},
        "pass": {"type": "boolean"},
        "spec": {"type": "object"},
        "seed": {"type": "integer"},
        "stream": {"type": "integer"},
    },
}

FIT_RESULT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["alpha", "beta", "lambda", "log_likelihood", "iterations", "converged", "standard_errors"],
    "properties": {
        "alpha": {"type": "number", "exclusiveMinimum": 0},
        "beta": {"type": "number", "exclusiveMinimum": 0},
        "lambda": {"type": "number", "exclusiveMinimum": 0},
        "log_likelihood": _NUM,
        "iterations": {"type": "integer", "minimum": 0},
        "converged": {"type": "boolean"},
        "standard_errors": {
            "oneOf": [{"type": "null"}, {"type": "array", "items": _NUM, "minItems": 3, "maxItems": 3}],
        },
    },
}

ERROR_OUTPUT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["error"],
    "properties": {"error": {"type": "string"}},
}
