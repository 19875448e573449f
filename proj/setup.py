"""Builds the _fisherlab extension by delegating to the repository's CMake tree."""

import os
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str, sourcedir: str = "") -> None:
        super().__init__(name, sources=[])
        self.sourcedir = os.fspath(Path(sourcedir).resolve())


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        ext_dir = Path(self.get_ext_fullpath(ext.name)).resolve().parent
        cfg = "Debug" if self.debug else "Release"
        cmake_args = [
            f"-DCMAKE_LIBRARY_OUTPUT_DIRECTORY={ext_dir}{os.sep}",
            f"-DPython3_EXECUTABLE={sys.executable}",
            f"-DCMAKE_BUILD_TYPE={cfg}",
            "-DFISHERLAB_BUILD_CLI=OFF",
            "-DFISHERLAB_BUILD_TESTS=OFF",
            "-DFISHERLAB_BUILD_PYTHON=ON",
        ]
        build_temp = Path(self.build_temp) / ext.name
        build_temp.mkdir(parents=True, exist_ok=True)
        subprocess.run(["cmake", ext.sourcedir, *cmake_args], cwd=build_temp, check=True)
        subprocess.run(
            ["cmake", "--build", ".", "--target", "_fisherlab", "--parallel"],
            cwd=build_temp,
            check=True,
        )


setup(
    packages=["fisherlab"],
    package_dir={"": "python"},
    ext_modules=[CMakeExtension("fisherlab._fisherlab")],
    cmdclass={"build_ext": CMakeBuild},
    zip_safe=False,
)
