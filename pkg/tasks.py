"""Invoke tasks for graphstein"""

import os
import re
import sys
import glob
import shutil
import subprocess

from invoke import task


NAME = "graphstein"
ROOT_DIR = os.path.dirname(os.path.abspath(__file__))
DEV_DEPS = ["pytest", "pytest-cov", "hypothesis", "flake8", "black", "invoke"]
SOURCES = [NAME, "tests", "tasks.py", "setup.py"]

if not os.path.isdir(os.path.join(ROOT_DIR, NAME)):
    sys.exit(f"Expected the {NAME} package next to tasks.py")


def _python(*args):
    """Run a python module in the repo root, exit on failure."""
    ret_code = subprocess.call([sys.executable, "-m", *args], cwd=ROOT_DIR)
    if ret_code:
        sys.exit(ret_code)


@task
def tests(ctx, cover=False, slow=False):
    """Run the unit tests with coverage. Use --slow to include the
    statistical calibration tests, and --cover to open the html report.
    """
    if slow:
        os.environ["GRAPHSTEIN_SLOW"] = "1"
    _python("pytest", "-v", f"--cov={NAME}", "--cov-report=term", "--cov-report=html", "tests")
    if cover:
        import webbrowser

        webbrowser.open(os.path.join(ROOT_DIR, "htmlcov", "index.html"))


@task
def lint(ctx):
    """Check for undefined names, unused imports and the like (flake8)."""
    _python(
        "flake8",
        *SOURCES,
        "--max-line-length=999",
        "--extend-ignore=N,E731,E203,E741,F541,D,B",
    )
    print("No style errors found")


@task
def checkformat(ctx):
    """Check that the code is formatted with black. Use format to fix."""
    _python("black", "--check", *SOURCES)


@task
def format(ctx):
    """Format the code with black."""
    _python("black", *SOURCES)


@task
def docs(ctx, serve=False):
    """Build the docs with mkdocs. Use --serve to view them live."""
    ret_code = subprocess.call(
        [sys.executable, "-m", "mkdocs", "serve" if serve else "build"],
        cwd=os.path.join(ROOT_DIR, "docs"),
    )
    sys.exit(ret_code)


@task
def devdeps(ctx):
    """Install the packages needed to test, lint and format."""
    _python("pip", "install", *DEV_DEPS)


@task
def clean(ctx):
    """Remove caches, coverage reports and build artifacts."""
    patterns = [
        "**/__pycache__",
        "**/*.pyc",
        ".pytest_cache",
        ".hypothesis",
        ".coverage",
        "htmlcov",
        "build",
        "dist",
        "*.egg-info",
        "docs/site",
    ]
    for pattern in patterns:
        for path in glob.glob(os.path.join(ROOT_DIR, pattern), recursive=True):
            if "examples" in os.path.relpath(path, ROOT_DIR).split(os.sep):
                continue
            print("Removing", os.path.relpath(path, ROOT_DIR))
            if os.path.isdir(path):
                shutil.rmtree(path)
            else:
                os.remove(path)


@task
def bumpversion(ctx, version=""):
    """Set the version in graphstein/__init__.py, or show it if not given."""
    filename = os.path.join(ROOT_DIR, NAME, "__init__.py")
    with open(filename, "rb") as f:
        text = f.read().decode()
    match = re.search(r'^__version__ = "(.*?)"$', text, re.MULTILINE)
    if not match:
        raise ValueError("Could not find version definition")
    version = version.lstrip("v")
    if not version:
        print(match.group(0))
        return
    text = text[: match.start(1)] + version + text[match.end(1) :]
    with open(filename, "wb") as f:
        f.write(text.encode())
    subprocess.run(["git", "diff", filename], cwd=ROOT_DIR)
    print(f"Now commit and tag with: git tag v{version}")
