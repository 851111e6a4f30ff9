"""Collect the mamba spec files so that pytest runs them through mamba."""

import subprocess
import sys

import pytest


def pytest_collect_file(parent, file_path):
    if file_path.suffix == '.py' and file_path.name.endswith('_spec.py'):
        return MambaSpecFile.from_parent(parent, path=file_path)
    return None


class MambaSpecFile(pytest.File):
    def collect(self):
        yield MambaSpecItem.from_parent(self, name=self.path.name)


class MambaSpecItem(pytest.Item):
    def runtest(self):
        result = subprocess.run(
            [sys.executable, '-m', 'mamba.cli', '--format', 'documentation', str(self.path)],
            cwd=str(self.config.rootpath),
            capture_output=True,
            text=True,
        )
        if result.returncode != 0:
            raise MambaSpecFailure(result.stdout + result.stderr)

    def repr_failure(self, excinfo):
        if isinstance(excinfo.value, MambaSpecFailure):
            return str(excinfo.value)
        return super().repr_failure(excinfo)

    def reportinfo(self):
        return self.path, 0, 'mamba spec: {0}'.format(self.name)


class MambaSpecFailure(Exception):
    """A mamba spec file reported failing examples."""
