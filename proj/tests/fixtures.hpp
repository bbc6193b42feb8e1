#pragma once

// Hand-written expressions with known graphs.

namespace fusion::testing {

// path a - b - c, b built twice and fused
inline constexpr const char* kP3 =
    "(fuse 2 (union (join 1 2 (union (vert 1) (vert 2))) (join 3 2 (union (vert 3) (vert 2)))))";

inline constexpr const char* kK23 = "(join 1 2 (union (verts 1 2) (verts 2 3)))";

// path on six vertices whose two ends are fused
inline constexpr const char* kC5 =
    "(fuse 1 (ren 2 1 (ren 3 2 (ren 2 4 (join 2 3 (union (ren 3 2 (ren 2 4 (join 2 3 (union (ren 3 2 (ren 2 4 "
    "(join 2 3 (union (ren 3 2 (ren 2 4 (join 2 3 (union (join 1 2 (union (vert 1) (vert 2))) (vert 3))))) "
    "(vert 3))))) (vert 3))))) (vert 3)))))))";

inline constexpr const char* kK3 = "(join 1 2 (union (vert 1) (ren 1 2 (join 1 2 (union (vert 1) (vert 2))))))";

}  // namespace fusion::testing
