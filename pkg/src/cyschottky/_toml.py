from __future__ import annotations

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib


def read_toml(path) -> dict:
    with open(path, "rb") as fh:
        return tomllib.load(fh)
