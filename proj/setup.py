# Copyright 2026 The R2Rec Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Builds the _r2rec extension directly from the core sources it needs.

The extension covers the numeric/parsing surface only, so it compiles just
those translation units instead of linking the full static library; the
CMake build (python/CMakeLists.txt, -DR2REC_BUILD_PYTHON=ON) stays the
path for hacking on the bindings alongside the C++ targets.
"""

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "r2rec._r2rec",
    [
        "python/bindings.cpp",
        "src/rng.cpp",
        "src/reward.cpp",
        "src/grpo.cpp",
        "src/metrics.cpp",
        "src/parse.cpp",
    ],
    include_dirs=["include", "vendor"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
