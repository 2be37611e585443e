"""Batch CLI: a thin client of the analysis service.

Every subcommand builds a RunConfig (JSON config file plus flag overrides,
flags win), posts it to the service — an in-process ASGI app by default, or
a remote server via --server — and writes the response as CSV files with a
JSON sidecar.  The CSV body embeds the full config, so identical configs
reproduce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path

import click
import httpx
from pydantic import ValidationError

from waveheatnet.service import RunConfig, app


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=None)
    # in-process: drive the ASGI app directly, no server needed
    from fastapi.testclient import TestClient

    return TestClient(app)


def _merge_config(config_path, **flags) -> RunConfig:
    data: dict = {}
    if config_path:
        data.update(json.loads(Path(config_path).read_text()))
    if flags.get("betas") is not None:
        parts = [p for p in str(flags["betas"]).split(",") if p]
        if len(parts) != 3:
            raise click.UsageError("--betas expects three comma-separated values")
        data["betas"] = [float(p) for p in parts]
    for key in ("bc", "n", "dt", "T", "s_min", "s_max", "num_points", "seed"):
        if flags.get(key) is not None:
            data[key] = flags[key]
    if flags.get("t_lo") is not None or flags.get("t_hi") is not None:
        lo = flags.get("t_lo")
        hi = flags.get("t_hi")
        base = data.get("t_window", list(RunConfig().t_window))
        data["t_window"] = [lo if lo is not None else base[0],
                            hi if hi is not None else base[1]]
    try:
        return RunConfig(**data)
    except ValidationError as exc:
        raise click.UsageError(f"invalid configuration: {exc}") from exc


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _write_csv(path: Path, config: dict, header: list[str], rows) -> None:
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(x) for x in row])
    path.write_text(buf.getvalue())


def _write_sidecar(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _post(server, url, json_body, params=None) -> dict:
    with _client(server) as client:
        resp = client.post(url, json=json_body, params=params or {})
    if resp.status_code != 200:
        raise click.ClickException(f"service error {resp.status_code}: {resp.text}")
    return resp.json()


_shared = [
    click.option("--config", "config_path", type=click.Path(exists=True),
                 default=None, help="JSON config file; flags override it."),
    click.option("--betas", default=None, help="three diffusivities a,b,c"),
    click.option("--bc", type=click.Choice(["dirichlet", "neumann"]), default=None),
    click.option("--n", type=int, default=None, help="cells per edge"),
    click.option("--dt", type=float, default=None),
    click.option("--T", "T", type=float, default=None),
    click.option("--s-min", "s_min", type=float, default=None),
    click.option("--s-max", "s_max", type=float, default=None),
    click.option("--num-points", type=int, default=None),
    click.option("--seed", type=int, default=None),
    click.option("--out", type=click.Path(), default=".", help="output directory"),
    click.option("--server", default=None,
                 help="base URL of a running service; default is in-process"),
]


def shared_options(fn):
    for opt in reversed(_shared):
        fn = opt(fn)
    return fn


@click.group()
def main():
    """Wave-heat network analyses: transfer functions, resolvent scans,
    energy decay, verification."""


@main.command()
@shared_options
def transfer(config_path, out, server, **flags):
    """Scan P2(is), Re P2(is), eta, mu and mu/eta over the s-window."""
    cfg = _merge_config(config_path, **flags)
    payload = _post(server, "/transfer/scan", cfg.model_dump(mode="json"))
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    header = ["s", "eta", "mu", "bound"]
    pairs = [(i, j) for i in range(3) for j in range(i, 3)]
    header += [f"p2_{i+1}{j+1}_re" for i, j in pairs]
    header += [f"p2_{i+1}{j+1}_im" for i, j in pairs]
    header += [f"re_p2_{i+1}{j+1}" for i, j in pairs]
    rows = []
    for r in payload["rows"]:
        row = [r["s"], r["eta"], r["mu"], r["bound"]]
        row += [r["p2_real"][i][j] for i, j in pairs]
        row += [r["p2_imag"][i][j] for i, j in pairs]
        row += [r["re_p2"][i][j] for i, j in pairs]
        rows.append(row)
    _write_csv(outdir / "transfer.csv", payload["config"], header, rows)
    _write_sidecar(outdir / "transfer.json", payload)
    click.echo(f"wrote {outdir / 'transfer.csv'}")
    if payload["eta_fit"]:
        click.echo(f"eta growth exponent: {payload['eta_fit']['exponent']:.4f}")
        click.echo(f"norm growth exponent: {payload['norm_fit']['exponent']:.4f}")


@main.command()
@shared_options
@click.option("--variant", type=click.Choice(["full", "wave-damped",
                                              "heat-dirichlet"]), default="full")
def resolvent(config_path, out, server, variant, **flags):
    """Resolvent-norm scan with the theorem-bound comparison."""
    cfg = _merge_config(config_path, **flags)
    payload = _post(server, "/resolvent/scan", cfg.model_dump(mode="json"),
                    params={"variant": variant})
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    header = ["s", "norm", "flag"]
    rows = [[r["s"], r["norm"], r["flag"]] for r in payload["rows"]]
    if payload["bound"] is not None:
        header += ["bound", "ratio"]
        for row, b in zip(rows, payload["bound"]):
            row += [b, row[1] / b]
    stem = f"resolvent_{variant.replace('-', '_')}"
    _write_csv(outdir / f"{stem}.csv", payload["config"], header, rows)
    _write_sidecar(outdir / f"{stem}.json", payload)
    click.echo(f"wrote {outdir / (stem + '.csv')}")
    if payload["fit_measured"]:
        click.echo(f"measured growth exponent (envelope): "
                   f"{payload['fit_measured']['exponent']:.4f}")
    click.echo(f"sigma_min(A_h) = {payload['kernel']['sigma_min']:.4e} "
               f"(invertible: {payload['kernel']['invertible']})")


@main.command()
@shared_options
@click.option("--variant", type=click.Choice(["full", "wave-damped",
                                              "heat-dirichlet"]), default="full")
@click.option("--data", type=click.Choice(["classical", "mild", "both"]),
              default="both")
@click.option("--t-lo", type=float, default=None, help="fit window start")
@click.option("--t-hi", type=float, default=None, help="fit window end")
def simulate(config_path, out, server, variant, data, **flags):
    """Time-step the network and record the energy trace."""
    cfg = _merge_config(config_path, **flags)
    payload = _post(server, "/simulate", cfg.model_dump(mode="json"),
                    params={"variant": variant, "data": data})
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    for kind, run in payload["runs"].items():
        stem = f"trace_{variant.replace('-', '_')}_{kind}"
        rows = list(zip(run["trace"]["times"], run["trace"]["energies"]))
        _write_csv(outdir / f"{stem}.csv", payload["config"], ["t", "E"], rows)
        _write_sidecar(outdir / f"{stem}.json", run)
        msg = f"{kind}: E(T)/E(0) = {run['final_energy_ratio']:.3e}"
        if run["decay_fit"]:
            msg += f", decay exponent alpha = {run['decay_fit']['exponent']:.3f}"
        click.echo(msg)
        click.echo(f"wrote {outdir / (stem + '.csv')}")


@main.command("verify-all")
@click.option("--quick", is_flag=True, help="downscaled smoke run")
@click.option("--out", type=click.Path(), default=".")
@click.option("--server", default=None)
def verify_all(quick, out, server):
    """Run every verification check and write a summary JSON."""
    payload = _post(server, "/verify", {"quick": quick})
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    _write_sidecar(outdir / "verify.json", payload)
    for r in payload["results"]:
        status = "PASS" if r["passed"] else "FAIL"
        click.echo(f"[{status}] {r['name']}: {r['description']}")
        if r["detail"]:
            click.echo(f"       {r['detail']}")
    click.echo(f"wrote {outdir / 'verify.json'}")
    if not payload["all_passed"]:
        sys.exit(1)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port):
    """Run the analysis service."""
    import uvicorn

    uvicorn.run("waveheatnet.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
