#pragma once

#include "gnnlg/image.h"

namespace gnnlg {

// Four axis-aligned constant regions (depths 50, 100, 150, 200) split at
// roughly 45% of the height and 55% of the width.
Image rectangles_depth(int width, int height);

// A slanted background plane with a raised box, a disc and a tilted strip;
// a rough stand-in for an indoor depth map.
Image scene_depth(int width, int height);

}  // namespace gnnlg
