#pragma once

// httplib drags in <resolv.h>, whose `_res` macro breaks Eigen headers
// included later in the same translation unit.
#include "httplib.h"
#ifdef _res
#undef _res
#endif
