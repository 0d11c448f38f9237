#include "hermes/errors.hpp"
#include "hermes/harvest.hpp"
#include "hermes/util.hpp"

namespace hermes {

HarvestResult harvest_codemeta(ExecutionContext& ctx, const std::filesystem::path& path) {
    std::string text = util::read_file(path);  // FileNotFoundError when absent

    ParsedRecord parsed = deserialize(text);

    HarvestResult result;
    result.metadata = std::move(parsed.record);
    result.meta["path"] = path.string();
    result.meta["context_warning"] = parsed.context_warning;
    if (!parsed.warnings.empty()) {
        result.meta["warnings"] = parsed.warnings;
    }

    if (parsed.context_warning) {
        ctx.log().warning("harvest.codemeta",
                          path.string() + ": context differs from the expected one");
    }
    return result;
}

HarvestResult CodemetaHarvestPlugin::harvest(ExecutionContext& ctx) {
    return harvest_codemeta(ctx, ctx.working_dir() / "codemeta.json");
}

} // namespace hermes
