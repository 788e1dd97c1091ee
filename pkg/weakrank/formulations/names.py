# weakrank/formulations/names.py
# Variable names are 1-based so exported files read like the notation.


def x(r: int, s: int) -> str:
    return f"x_{r + 1}_{s + 1}"


def y(r: int, u: int) -> str:
    return f"y_{r + 1}_{u + 1}"


def d(r: int, s: int) -> str:
    return f"d_{r + 1}_{s + 1}"


def a(r: int) -> str:
    return f"a_{r + 1}"


def b(r: int, s: int) -> str:
    return f"b_{r + 1}_{s + 1}"


def z(r: int) -> str:
    return f"z_{r + 1}"
