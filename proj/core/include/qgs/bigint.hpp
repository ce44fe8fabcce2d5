#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace qgs {

using BigInt = boost::multiprecision::cpp_int;

}  // namespace qgs
