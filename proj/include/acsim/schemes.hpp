#pragma once

#include <functional>
#include <map>
#include <string>

#include "acsim/mapping.hpp"
#include "acsim/scheme.hpp"
#include "acsim/schemes/dac.hpp"
#include "acsim/schemes/gms.hpp"
#include "acsim/schemes/rbac.hpp"
#include "acsim/schemes/sd3gm.hpp"

namespace acsim {

struct SchemeEntry {
  std::function<Scheme()> make;
  std::string description;
};

inline const std::map<std::string, SchemeEntry>& scheme_registry() {
  static const std::map<std::string, SchemeEntry> reg = {
      {"gms", {[] { return gms_scheme(); },
               "group messaging with time-variant membership"}},
      {"rbac_u", {[] { return rbac_u_scheme(); },
                  "NIST RBAC extended with the group-catalog machine U"}},
      {"dac_v", {[] { return dac_v_scheme(); },
                 "Graham-Denning DAC extended with the group machine V"}},
      {"sd3gm", {[] { return sd3gm_scheme(); },
                 "SD3 trust management instantiated for group messaging"}},
      {"dac", {[] { return dac_scheme(); }, "Graham-Denning DAC"}},
      {"adac", {[] { return adac_scheme(); }, "administrative DAC"}},
      {"dac_m", {[] { return dac_m_scheme(); },
                 "DAC extended with the administrator machine M"}},
      {"dac_m_grant_all", {[] { return dac_m_grant_all_mutant(); },
                           "deliberately broken DAC-M with an unguarded "
                           "grant-all command (negative-testing target)"}},
  };
  return reg;
}

inline Scheme make_scheme(const std::string& name) {
  auto it = scheme_registry().find(name);
  if (it == scheme_registry().end())
    throw ConfigError("unknown scheme: " + name);
  return it->second.make();
}

inline Implementation make_implementation(const std::string& name) {
  if (name == "sigma_r") return sigma_r();
  if (name == "sigma_d") return sigma_d();
  if (name == "sigma_s") return sigma_s();
  if (name == "sigma_adac") return sigma_adac();
  if (name == "identity") return identity_implementation();
  throw ConfigError("unknown implementation: " + name);
}

// The universe an implementation's target scheme enumerates over, derived
// from the workload universe.
inline Universe target_universe(const std::string& impl,
                                const Universe& workload_universe) {
  if (impl == "sigma_r") return rbac_u_universe(workload_universe);
  if (impl == "sigma_d") return dac_v_universe(workload_universe);
  return workload_universe;
}

}  // namespace acsim
