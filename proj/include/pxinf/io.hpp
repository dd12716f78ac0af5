#pragma once

#include <filesystem>
#include <string>

namespace pxinf {

// 17 significant digits: enough to round-trip any double exactly.
std::string format_g17(double v);

// Write-then-rename so readers never observe a half-written file.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace pxinf
