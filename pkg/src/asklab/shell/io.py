"""Reading input files and writing command output."""

import json
import sys
from importlib import resources
from pathlib import Path

from asklab.graphloci import load_graph
from asklab.grouplab.lie import load_lie
from asklab.modrep import load_rep
from asklab.shell.pipeline import load_decomposition
from asklab.shell.schemes import load_scheme


def read_json(path):
    """JSON from a path, '-' for stdin, or 'builtin:NAME' for a shipped data file."""
    path = str(path)
    if path == "-":
        return json.load(sys.stdin)
    if path.startswith("builtin:"):
        name = path.split(":", 1)[1]
        if not name.endswith(".json"):
            name += ".json"
        return json.loads(resources.files("asklab.data").joinpath(name).read_text())
    return json.loads(Path(path).read_text())


def read_rep(path):
    return load_rep(read_json(path))


def read_graph(path):
    return load_graph(read_json(path))


def read_lie(path):
    from asklab.shell.battery import LIE_BUILTINS

    if path in LIE_BUILTINS:
        return LIE_BUILTINS[path]()
    return load_lie(read_json(path))


def read_scheme(path):
    return load_scheme(read_json(path))


def read_decomposition(path):
    return load_decomposition(read_json(path))


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=False, default=str)


def write_text(text, out=None):
    if not text.endswith("\n"):
        text += "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)
