import shutil
import subprocess
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

NODE = shutil.which("node")


def run_node(code=None, path=None, cwd=None, timeout=30):
    """Run a snippet or file under node and return stdout; fails the test on
    a nonzero exit."""
    if NODE is None:
        pytest.skip("node is not installed")
    argv = [NODE, "-e", code] if code is not None else [NODE, str(path)]
    proc = subprocess.run(argv, capture_output=True, text=True, cwd=cwd, timeout=timeout)
    assert proc.returncode == 0, f"node failed: {proc.stderr}"
    return proc.stdout


@pytest.fixture(scope="session")
def node():
    if NODE is None:
        pytest.skip("node is not installed")
    return NODE
