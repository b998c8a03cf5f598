import json
from pathlib import Path
from typing import Any, Union

from sympy import Rational

from src.geometry.nob import NOBPolygon


def exact_str(value) -> str:
    value = Rational(value)
    return str(value.p) if value.q == 1 else f"{value.p}/{value.q}"


def to_jsonable(value: Any) -> Any:
    """Exact numbers become integers or "p/q" strings; containers are walked."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Rational):
        return int(value) if value.q == 1 else exact_str(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return str(value)


def dump_json(value: Any) -> str:
    return json.dumps(to_jsonable(value), indent=2, sort_keys=False)


def polygon_to_csv(poly: NOBPolygon, path: Union[str, Path]) -> None:
    """One vertex per line: `vertex,t,s` with exact fractions."""
    import pandas as pd

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df = pd.DataFrame(poly.to_rows(), columns=["vertex", "t", "s"])
    df.to_csv(path, index=False, lineterminator="\n")


def polygon_to_svg(poly: NOBPolygon, path: Union[str, Path], title: str = "") -> None:
    """Draw the polygon with the graphs of α and β on a 640x480 canvas."""
    import matplotlib

    matplotlib.use("Agg")
    from matplotlib import pyplot as plt

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(6.4, 4.8), dpi=100)
    xs = [float(t) for t, _ in poly.vertices] + [float(poly.vertices[0][0])]
    ys = [float(s) for _, s in poly.vertices] + [float(poly.vertices[0][1])]
    ax.fill(xs, ys, alpha=0.2, color="tab:blue")
    ax.plot(xs, ys, color="tab:blue")
    for fn, label, ls in ((poly.alpha, "alpha", "dashed"), (poly.beta, "beta", "dotted")):
        ts = [float(t) for t in fn.breakpoints]
        ax.plot(ts, [float(fn(t)) for t in fn.breakpoints], ls=ls, label=label, color="black")
    for t, s in poly.vertices:
        ax.annotate(f"({exact_str(t)}, {exact_str(s)})", (float(t), float(s)), fontsize=8)
    ax.set_xlabel("t")
    ax.set_ylabel("s")
    ax.set_title(title)
    ax.legend()
    fig.savefig(path, format="svg")
    plt.close(fig)
