#pragma once

namespace ringlab {

inline constexpr const char* kVersion = "0.1.0";

#ifdef RINGLAB_GIT_REVISION
inline constexpr const char* kGitRevision = RINGLAB_GIT_REVISION;
#else
inline constexpr const char* kGitRevision = "unknown";
#endif

}  // namespace ringlab
