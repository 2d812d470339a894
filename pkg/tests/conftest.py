import os
import subprocess
import sys

import pytest


@pytest.fixture
def run_cli():
    """Run the installed CLI in a subprocess and capture output."""

    def _run(args, env_extra=None):
        env = os.environ.copy()
        if env_extra:
            env.update(env_extra)
        return subprocess.run(
            [sys.executable, "-m", "crossfield", *args],
            capture_output=True,
            text=True,
            env=env,
        )

    return _run
