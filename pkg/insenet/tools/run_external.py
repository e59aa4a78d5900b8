"""Tool for running external executables (codecs, quality oracles)."""

from __future__ import annotations

import os
import select
import shlex
import shutil
import signal
import subprocess
import time
from dataclasses import dataclass
from typing import Dict, List

from ..errors import ConfigurationError


@dataclass
class ExternalResult:
    returncode: int
    stdout: str
    stderr: str
    timed_out: bool = False

    @property
    def output(self) -> str:
        """Captured stdout and stderr formatted for error messages."""
        output_parts = []
        if self.stdout:
            output_parts.append(f"STDOUT:\n{self.stdout}")
        if self.stderr:
            output_parts.append(f"STDERR:\n{self.stderr}")
        return "\n".join(output_parts)


def render_command(template: str, values: Dict[str, str]) -> List[str]:
    """Split a command template and substitute its placeholders.

    Args:
        template: Command line such as ``"fdkaac-roundtrip {input} {output} {bitrate}"``
        values: Placeholder values; each token is formatted separately so paths
            containing spaces stay single arguments

    Returns:
        The argument vector

    Raises:
        ConfigurationError: If the template is empty, references an unknown
            placeholder, or its executable cannot be found
    """
    tokens = shlex.split(template)
    if not tokens:
        raise ConfigurationError("Empty command template")
    try:
        argv = [token.format(**values) for token in tokens]
    except KeyError as e:
        raise ConfigurationError(f"Unknown placeholder {e} in command template '{template}'")
    if shutil.which(argv[0]) is None and not os.path.isfile(argv[0]):
        raise ConfigurationError(f"Executable not found: {argv[0]}")
    return argv


def run_external(argv: List[str], *, cwd: str | None = None, timeout: int = 600) -> ExternalResult:
    """Run an executable and capture its output.

    Args:
        argv: Argument vector (no shell)
        cwd: Working directory for the process
        timeout: Maximum time in seconds to wait for completion (0 for no timeout)

    Returns:
        ExternalResult with the exit code and captured stdout/stderr. On timeout
        the whole process group is killed and ``timed_out`` is set.
    """
    process = None
    stdout = ""
    stderr = ""
    try:
        # Own process group so the tool and its children can be killed together
        process = subprocess.Popen(
            argv,
            cwd=cwd,
            text=True,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            preexec_fn=os.setsid
        )

        start_time = time.time()
        reads = []
        if process.stdout:
            reads.append(process.stdout.fileno())
        if process.stderr:
            reads.append(process.stderr.fileno())

        while True:
            if process.poll() is not None:
                break

            if timeout > 0 and time.time() - start_time > timeout:
                os.killpg(os.getpgid(process.pid), signal.SIGTERM)
                time.sleep(0.1)
                if process.poll() is None:
                    os.killpg(os.getpgid(process.pid), signal.SIGKILL)
                return ExternalResult(returncode=-1, stdout=stdout, stderr=stderr, timed_out=True)

            readable, _, _ = select.select(reads, [], [], 0.1)
            for fd in readable:
                chunk = os.read(fd, 4096)
                if not chunk:
                    continue
                if process.stdout and fd == process.stdout.fileno():
                    stdout += chunk.decode(errors="replace")
                elif process.stderr and fd == process.stderr.fileno():
                    stderr += chunk.decode(errors="replace")

        final_stdout, final_stderr = process.communicate()
        stdout += final_stdout
        stderr += final_stderr
        return ExternalResult(returncode=process.returncode, stdout=stdout, stderr=stderr)

    except Exception:
        if process and process.poll() is None:
            try:
                os.killpg(os.getpgid(process.pid), signal.SIGTERM)
                time.sleep(0.1)
                if process.poll() is None:
                    os.killpg(os.getpgid(process.pid), signal.SIGKILL)
            except OSError:
                pass
        raise
