import shlex
import sys
import time
from pathlib import Path

import pytest

from ..errors import ConfigurationError
from .run_external import render_command, run_external

SCRIPTS = Path(__file__).parent / "test_scripts"
TOOL = str(SCRIPTS / "long_running_tool.py")


def test_normal_completion():
    result = run_external([sys.executable, TOOL, "stall", "1"], timeout=10)
    assert result.returncode == 0
    assert not result.timed_out
    assert "Encoding finished" in result.stdout


def test_timeout_kills_process():
    start = time.time()
    result = run_external([sys.executable, TOOL, "stall", "10"], timeout=1)
    assert result.timed_out
    assert time.time() - start < 3


def test_partial_output_captured_on_timeout():
    result = run_external([sys.executable, TOOL, "progress", "10"], timeout=2)
    assert result.timed_out
    assert "block 0 encoded" in result.stdout
    assert "block 0 clipped" in result.stderr


def test_exit_code_reported():
    result = run_external([sys.executable, TOOL, "fail", "3"], timeout=10)
    assert result.returncode == 3
    assert "unsupported bitrate" in result.stderr


def test_render_command_substitutes_each_token():
    template = f"{shlex.quote(sys.executable)} tool.py --in {{input}} --rate {{bitrate}}"
    argv = render_command(template, {"input": "/tmp/a b.wav", "bitrate": "24"})
    assert argv == [sys.executable, "tool.py", "--in", "/tmp/a b.wav", "--rate", "24"]


def test_render_command_errors():
    with pytest.raises(ConfigurationError):
        render_command("", {})
    with pytest.raises(ConfigurationError):
        render_command("definitely-not-an-installed-codec {input}", {"input": "x"})
    with pytest.raises(ConfigurationError):
        render_command(f"{shlex.quote(sys.executable)} {{missing}}", {})
