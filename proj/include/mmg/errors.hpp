#pragma once

#include <stdexcept>
#include <string>

namespace mmg
{

struct ParseError : std::runtime_error
{
    explicit ParseError(const std::string &msg) : std::runtime_error("parse error: " + msg) {}
};

struct ValidationError : std::runtime_error
{
    explicit ValidationError(const std::string &msg) : std::runtime_error("validation error: " + msg) {}
};

struct SolverError : std::runtime_error
{
    explicit SolverError(const std::string &msg) : std::runtime_error("solver error: " + msg) {}
};

} // namespace mmg
