#ifndef EQLAB_VERSION_HPP
#define EQLAB_VERSION_HPP

namespace eqlab {

inline constexpr const char* version = "0.1.0";

}

#endif
