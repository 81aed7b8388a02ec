#include "r13/errors.hpp"

namespace r13 {

void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

} // namespace r13
