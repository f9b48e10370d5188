import pytest

pytest.importorskip(
    "coincars_plots", reason="plots package not installed: pip install -e plots"
)
