#pragma once

#include <string>

namespace hag {

// Human-readable rendering of any artifact file: trees as an indented
// hierarchy, populations as per-dimension count tables, reports and
// summaries as metric tables. Throws UnknownArtifactType (with the byte
// offset for unparseable files).
std::string inspect_artifact(const std::string& path);

}  // namespace hag
