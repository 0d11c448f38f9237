#include "hermes/harvest.hpp"

namespace hermes {

HarvestResult harvest_funding(ExecutionContext& ctx) {
    HarvestResult result;
    result.metadata = new_record();

    std::string grant_id;
    const toml::Table& settings = ctx.plugin_settings();
    auto it = settings.find("grant_id");
    if (it != settings.end() && it->second.is_string()) {
        grant_id = it->second.str();
    }

    if (!grant_id.empty()) {
        result.metadata.set("funding", grant_id);
        result.meta["added"] = true;
    } else {
        result.meta["added"] = false;
    }
    return result;
}

HarvestResult FundingHarvestPlugin::harvest(ExecutionContext& ctx) {
    return harvest_funding(ctx);
}

} // namespace hermes
