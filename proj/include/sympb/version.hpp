#pragma once

#define SYMPB_VERSION_MAJOR 1
#define SYMPB_VERSION_MINOR 0
#define SYMPB_VERSION_PATCH 0
#define SYMPB_VERSION "1.0.0"

namespace sympb {
inline const char* version() { return SYMPB_VERSION; }
}  // namespace sympb
