#pragma once

#include <stdexcept>
#include <string>

namespace irt {

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// The interface cuts the mesh in a way the immersed element cannot handle:
/// an edge closure cut twice, an element boundary cut more than twice, the
/// interface leaving the domain, or a wide angle on an interface element.
/// Refining or perturbing the mesh usually fixes it.
class AssumptionViolation : public Error
{
public:
    using Error::Error;
};

/// Interface segments do not chain into closed loops.
class TopologyError : public Error
{
public:
    using Error::Error;
};

class UnsupportedDegree : public Error
{
public:
    using Error::Error;
};

class DegenerateTriangle : public Error
{
public:
    using Error::Error;
};

class NonPositiveCoefficient : public Error
{
public:
    using Error::Error;
};

class SingularSystem : public Error
{
public:
    using Error::Error;
};

class NonConvergence : public Error
{
public:
    using Error::Error;
};

class ConfigError : public Error
{
public:
    using Error::Error;
};

} // namespace irt
