#include <pybind11/pybind11.h>
PYBIND11_MODULE(_mmgrid, m) { m.doc() = "placeholder"; }
