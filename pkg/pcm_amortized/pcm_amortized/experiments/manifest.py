"""Run manifests: resolved config, seeds, constants and package versions."""

import logging
from importlib import metadata
from pathlib import Path

from ..config import RunConfig

logger = logging.getLogger(__name__)

PACKAGES = ("pcm-amortized", "numpy", "scipy", "pandas", "pandera", "pydantic", "python-dotenv", "dagster")


def package_versions() -> dict[str, str]:
    versions = {}
    for name in PACKAGES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = "not installed"
    return versions


def write_manifest(out_dir: Path, config: RunConfig, experiment: str) -> Path:
    """Write ``manifest.txt`` into ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    lines = [
        f"# experiment: {experiment}",
        f"# seed: {config.run.seed}",
        "# wingrock: " + ", ".join(f"{k}={v!r}" for k, v in config.wingrock_consts().as_dict().items()),
    ]
    lines.extend(f"# version {name}: {version}" for name, version in package_versions().items())
    path = out_dir / "manifest.txt"
    path.write_text("\n".join(lines) + "\n\n" + config.to_ini(), encoding="utf-8")
    logger.info(f"Wrote manifest to {path}")
    return path
