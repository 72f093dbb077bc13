// Copyright 2026 The edgeha Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "edgeha/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string_view>
#include <utility>

#include "edgeha/action_parser.hpp"
#include "edgeha/random.hpp"
#include "edgeha/reference_home.hpp"

namespace edgeha {

namespace {

struct PoolDevice {
  std::string_view id;
  std::string_view name;
};

struct Pool {
  std::string_view domain;
  std::vector<PoolDevice> devices;
};

const std::vector<Pool>& pools() {
  static const std::vector<Pool> kPools = {
      {"light",
       {{"light.living_room_lamp", "Living Room Lamp"},
        {"light.kitchen_ceiling", "Kitchen Ceiling Light"},
        {"light.front_porch", "Front Porch Light"},
        {"light.bedroom_sconce", "Bedroom Wall Sconce"},
        {"light.office_desk_lamp", "Office Desk Lamp"},
        {"light.garage", "Garage Light"},
        {"light.hallway_pendant", "Hallway Pendant"},
        {"light.dining_chandelier", "Dining Room Chandelier"}}},
      {"switch",
       {{"switch.basement_lights", "Basement Lights Switch"},
        {"switch.garden_pump", "Garden Pump"},
        {"switch.coffee_maker", "Coffee Maker Plug"},
        {"switch.christmas_tree", "Christmas Tree Lights"},
        {"switch.space_heater", "Space Heater Outlet"},
        {"switch.attic_vent", "Attic Vent Switch"}}},
      {"fan",
       {{"fan.bedroom_ceiling", "Bedroom Ceiling Fan"},
        {"fan.living_room", "Living Room Fan"},
        {"fan.office_tower", "Office Tower Fan"},
        {"fan.bathroom_exhaust", "Bathroom Exhaust Fan"},
        {"fan.patio", "Patio Fan"}}},
      {"cover",
       {{"cover.master_bedroom", "Master Bedroom"},
        {"cover.garage_door", "Garage Door"},
        {"cover.living_room_curtains", "Living Room Curtains"},
        {"cover.kitchen_blinds", "Kitchen Blinds"},
        {"cover.patio_awning", "Patio Awning"}}},
      {"lock",
       {{"lock.office_cabinet", "Office cabinet lock"},
        {"lock.front_door", "Front Door Lock"},
        {"lock.back_door", "Back Door Lock"},
        {"lock.garage_side_door", "Garage Side Door Lock"},
        {"lock.garden_shed", "Garden Shed Lock"}}},
      {"media_player",
       {{"media_player.harman_kardon_aura", "Harman Kardon Glass Speaker"},
        {"media_player.living_room_tv", "Living Room TV"},
        {"media_player.kitchen_radio", "Kitchen Radio"},
        {"media_player.bedroom_sonos", "Bedroom Sonos"},
        {"media_player.office_speaker", "Office Speaker"}}},
      {"timer",
       {{"timer.kitchen_oven", "Kitchen oven timer"},
        {"timer.laundry", "Laundry timer"},
        {"timer.tea", "Tea Timer"},
        {"timer.workout", "Workout Timer"}}},
      {"vacuum",
       {{"vacuum.hallway_neato", "Hallway path cleaner"},
        {"vacuum.living_room_roomba", "Living Room Roomba"},
        {"vacuum.upstairs_deebot", "Upstairs Deebot"}}},
      {"climate",
       {{"climate.living_room_thermostat", "Living Room Thermostat"},
        {"climate.bedroom_ac", "Bedroom Air Conditioner"},
        {"climate.office_heat_pump", "Office Heat Pump"}}},
      {"todo",
       {{"todo.shopping_list", "Shopping List"},
        {"todo.household_chores", "Household Chores"},
        {"todo.packing_list", "Packing List"}}},
  };
  return kPools;
}

const Pool& pool_for(std::string_view domain) {
  for (const auto& p : pools()) {
    if (p.domain == domain) return p;
  }
  throw std::logic_error("no device pool for domain " + std::string(domain));
}

struct Phrasing {
  std::vector<std::string_view> prompts;    // {n}: lowercase name, {v}: value
  std::vector<std::string_view> responses;  // {N}: friendly name, {v}: value
};

const std::map<std::string, Phrasing, std::less<>>& phrasings() {
  static const std::map<std::string, Phrasing, std::less<>> kPhrasings = {
      {"turn_on",
       {{"turn on the {n}", "switch on the {n}", "power on the {n}", "{n} on please",
         "i need the {n} on", "could you turn the {n} on"},
        {"turning on {N}", "switching on {N} for you", "{N} is coming on"}}},
      {"turn_off",
       {{"turn off the {n}", "switch off the {n}", "shut off the {n}", "{n} off please",
         "kill the {n}", "could you turn the {n} off"},
        {"turning off {N}", "switching off {N} for you", "{N} is going off"}}},
      {"toggle",
       {{"toggle the {n}", "flip the {n}", "reverse the {n}", "toggle {n} please",
         "switch the {n} to the other state"},
        {"switching {N} state as requested", "toggling {N}", "flipping {N} for you"}}},
      {"increase_speed",
       {{"speed up the {n}", "increase the {n} speed", "make the {n} blow harder",
         "turn the {n} up a notch"},
        {"speeding up {N}", "increasing the speed of {N}"}}},
      {"decrease_speed",
       {{"slow down the {n}", "decrease the {n} speed", "make the {n} gentler",
         "turn the {n} down a notch"},
        {"slowing down {N}", "decreasing the speed of {N}"}}},
      {"open",
       {{"open the {n}", "raise the {n}", "open up the {n}", "let some light in with the {n}"},
        {"opening {N}", "raising {N} now"}}},
      {"close",
       {{"close the {n}", "lower the {n}", "shut the {n}", "draw the {n} closed"},
        {"closing {N}", "lowering {N} now"}}},
      {"stop",
       {{"stop the {n}", "halt the {n}", "freeze the {n} where it is", "stop moving the {n}"},
        {"stopping {N}", "halting {N}"}}},
      {"lock",
       {{"lock the {n}", "secure the {n}", "make sure the {n} is locked", "bolt the {n}"},
        {"locking {N}", "securing {N} now"}}},
      {"unlock",
       {{"unlock the {n}", "unbolt the {n}", "release the {n}", "let me through the {n}"},
        {"unlocking {N}", "releasing {N} now"}}},
      {"media_next_track",
       {{"skip to the next track on the {n}", "next song on the {n}", "skip this song on the {n}"},
        {"skipping ahead on {N}", "playing the next track on {N}"}}},
      {"media_previous_track",
       {{"go back a track on the {n}", "previous song on the {n}", "replay the last song on the {n}"},
        {"going back a track on {N}", "playing the previous track on {N}"}}},
      {"media_pause",
       {{"pause the {n}", "pause playback on the {n}", "hold the music on the {n}"},
        {"pausing {N}", "pausing playback on {N}"}}},
      {"media_play",
       {{"play music on the {n}", "resume the {n}", "start playback on the {n}"},
        {"resuming {N}", "starting playback on {N}"}}},
      {"media_stop",
       {{"stop playback on the {n}", "end the music on the {n}", "stop playing on the {n}"},
        {"stopping playback on {N}", "ending playback on {N}"}}},
      {"volume_up",
       {{"turn up the {n}", "raise the volume on the {n}", "make the {n} louder"},
        {"raising the volume on {N}", "turning up {N}"}}},
      {"volume_down",
       {{"turn down the {n}", "lower the volume on the {n}", "make the {n} quieter"},
        {"lowering the volume on {N}", "turning down {N}"}}},
      {"volume_mute",
       {{"mute the {n}", "silence the {n}", "mute audio on the {n}"},
        {"muting {N}", "silencing {N}"}}},
      {"start",
       {{"start the {n}", "have the {n} begin", "get the {n} going", "run the {n}"},
        {"starting {N}", "{N} is starting"}}},
      {"start_timer",
       {{"start the {n} for {v}", "set the {n} to {v}", "run the {n} for {v}"},
        {"starting {N} for {v}", "{N} set for {v}"}}},
      {"cancel",
       {{"cancel the {n}", "clear the {n}", "call off the {n}"},
        {"cancelling {N}", "{N} cancelled"}}},
      {"pause",
       {{"pause the {n}", "hold the {n} for now", "put the {n} on pause"},
        {"pausing {N}", "{N} paused"}}},
      {"return_to_base",
       {{"send the {n} back to its dock", "send {n} home", "dock the {n}"},
        {"sending {N} back to its dock", "{N} is heading home"}}},
      {"set_temperature",
       {{"set the {n} to {v} degrees", "make it {v} degrees on the {n}",
         "change the {n} temperature to {v}"},
        {"setting {N} to {v} degrees", "{N} now targeting {v} degrees"}}},
      {"set_humidity",
       {{"set the {n} humidity to {v} percent", "keep humidity at {v} on the {n}"},
        {"setting {N} humidity to {v} percent", "{N} humidity set to {v}"}}},
      {"set_fan_mode",
       {{"set the {n} fan to {v}", "put the {n} fan on {v}"},
        {"setting the {N} fan to {v}", "{N} fan mode is now {v}"}}},
      {"set_hvac_mode",
       {{"switch the {n} to {v} mode", "put the {n} in {v} mode", "set the {n} mode to {v}"},
        {"switching {N} to {v} mode", "{N} is now in {v} mode"}}},
      {"add_item",
       {{"add {v} to the {n}", "put {v} on the {n}", "remember {v} on the {n}"},
        {"adding {v} to {N}", "{v} is on {N} now"}}},
  };
  return kPhrasings;
}

std::string phrasing_key(const ServiceSignature& s) {
  if (s.domain == "timer" && s.name == "start") return "start_timer";
  return s.name;
}

std::string lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string fill(std::string_view pattern, std::string_view n, std::string_view name,
                 std::string_view value) {
  std::string out;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern.substr(i, 3) == "{n}") {
      out += n;
      i += 2;
    } else if (pattern.substr(i, 3) == "{N}") {
      out += name;
      i += 2;
    } else if (pattern.substr(i, 3) == "{v}") {
      out += value;
      i += 2;
    } else {
      out += pattern[i];
    }
  }
  return out;
}

template <typename T>
const T& pick(const std::vector<T>& items, SplitMix64& rng) {
  return items[static_cast<std::size_t>(rng.below(items.size()))];
}

DeviceState random_state(std::string_view domain, SplitMix64& rng) {
  DeviceState s;
  if (auto legal = legal_states(domain)) {
    s.primary_state = std::string((*legal)[static_cast<std::size_t>(rng.below(legal->size()))]);
  } else if (domain == "climate") {
    static const std::vector<std::string> kModes = {"off", "heat", "cool", "auto"};
    s.primary_state = pick(kModes, rng);
    s.attributes.set("temperature", static_cast<double>(16 + rng.below(13)));
  } else {
    s.primary_state = std::to_string(rng.below(10));
  }
  if (domain == "media_player") {
    s.attributes.set("vol", static_cast<double>(rng.below(101)) / 100.0);
  }
  if (domain == "fan") {
    s.attributes.set("percentage", static_cast<double>(10 * rng.below(11)));
  }
  return s;
}

// Parameter value and its spoken form.
std::pair<Scalar, std::string> random_param(std::string_view param, SplitMix64& rng) {
  if (param == "duration") {
    const auto minutes = 1 + rng.below(59);
    char buf[16];
    std::snprintf(buf, sizeof buf, "00:%02u:00", static_cast<unsigned>(minutes));
    return {std::string(buf), std::to_string(minutes) + " minutes"};
  }
  if (param == "temperature") {
    const auto t = 16 + rng.below(13);
    return {static_cast<double>(t), std::to_string(t)};
  }
  if (param == "humidity") {
    const auto h = 30 + 5 * rng.below(7);
    return {static_cast<double>(h), std::to_string(h)};
  }
  static const std::map<std::string_view, std::vector<std::string>> kWords = {
      {"fan_mode", {"low", "medium", "high", "auto"}},
      {"hvac_mode", {"off", "heat", "cool", "auto"}},
      {"item", {"milk", "eggs", "bread", "batteries", "coffee", "detergent", "apples", "rice"}},
  };
  auto it = kWords.find(param);
  if (it == kWords.end()) throw std::logic_error("no value generator for " + std::string(param));
  const std::string& w = pick(it->second, rng);
  return {w, w};
}

struct Intent {
  RawAction action;
  std::string prompt;
  std::string response;
};

Intent make_intent(const ServiceSignature& service, const PoolDevice& device, SplitMix64& rng) {
  const Phrasing& ph = phrasings().at(phrasing_key(service));
  Intent in;
  in.action.service = service.canonical();
  in.action.device = std::string(device.id);
  std::string spoken;
  for (const auto& p : service.params) {
    auto [value, words] = random_param(p, rng);
    in.action.params.emplace_back(p, std::move(value));
    spoken = std::move(words);
  }
  const std::string n = lower(device.name);
  in.prompt = fill(pick(ph.prompts, rng), n, device.name, spoken);
  in.response = fill(pick(ph.responses, rng), n, device.name, spoken);
  return in;
}

}  // namespace

std::map<std::string, std::size_t> class_quota(std::size_t total, std::size_t min_per_class) {
  const auto inventory = reference::class_inventory();
  std::size_t grand = 0;
  for (const auto& c : inventory) grand += c.total;
  std::map<std::string, std::size_t> quota;
  std::vector<std::pair<double, std::string>> remainders;
  std::size_t assigned = 0;
  for (const auto& c : inventory) {
    const double exact =
        static_cast<double>(total) * static_cast<double>(c.total) / static_cast<double>(grand);
    const auto base = static_cast<std::size_t>(std::floor(exact));
    quota[std::string(c.service)] = base;
    assigned += base;
    remainders.emplace_back(exact - static_cast<double>(base), std::string(c.service));
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < total && k < remainders.size(); ++k, ++assigned) {
    ++quota[remainders[k].second];
  }
  for (auto& [label, n] : quota) n = std::max(n, min_per_class);
  return quota;
}

std::vector<PromptDocument> synth_conversations(const SynthOptions& options) {
  const ServiceCatalog all = reference::builtin_catalog();
  std::vector<std::string> classes;
  for (const auto& [label, n] : class_quota(options.samples, options.min_per_class)) {
    classes.insert(classes.end(), n, label);
  }
  SplitMix64 rng(options.seed);
  shuffle(classes, rng);

  std::vector<PoolDevice> every;
  for (const auto& p : pools()) every.insert(every.end(), p.devices.begin(), p.devices.end());

  std::vector<PromptDocument> out;
  out.reserve(classes.size());
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& label : classes) {
    for (int attempt = 0;; ++attempt) {
      if (attempt == 1000) throw std::runtime_error("cannot draw a unique sample for " + label);
      const ServiceSignature& service = *all.find(label);
      const PoolDevice target = pick(pool_for(service.domain).devices, rng);

      std::vector<PoolDevice> home{target};
      const std::size_t want = std::min(options.distractors + 1, every.size());
      while (home.size() < want) {
        const PoolDevice& d = pick(every, rng);
        if (std::none_of(home.begin(), home.end(),
                         [&](const PoolDevice& h) { return h.id == d.id; })) {
          home.push_back(d);
        }
      }
      const bool multi = options.multi_intent_fraction > 0.0 && home.size() > 1 &&
                         rng.uniform() < options.multi_intent_fraction;
      shuffle(home, rng);

      SystemContext ctx;
      std::set<std::string> domains;
      for (const auto& d : home) {
        const EntityId id = parse_entity_id(d.id);
        domains.insert(id.domain());
        ctx.registry.add({id, std::string(d.name), random_state(id.domain(), rng)});
      }
      std::vector<ServiceSignature> services;
      for (const auto& s : all) {
        if (domains.count(s.domain)) services.push_back(s);
      }
      std::sort(services.begin(), services.end(),
                [](const auto& a, const auto& b) { return a.canonical() < b.canonical(); });
      for (auto& s : services) ctx.catalog.add(std::move(s));

      const Intent first = make_intent(service, target, rng);
      std::string user = first.prompt;
      std::string assistant;
      if (multi) {
        PoolDevice second = target;
        while (second.id == target.id) second = pick(home, rng);
        const std::string domain = parse_entity_id(second.id).domain();
        std::vector<const ServiceSignature*> options_for;
        for (const auto& s : ctx.catalog) {
          if (s.domain == domain && phrasings().count(phrasing_key(s))) options_for.push_back(&s);
        }
        const Intent extra = make_intent(*pick(options_for, rng), second, rng);
        user += " and " + extra.prompt;
        assistant = format_assistant_text(first.response + " and " + extra.response,
                                          first.action) +
                    "\n" + format_assistant_text("", extra.action).substr(1);
      } else {
        assistant = format_assistant_text(first.response, first.action);
      }
      std::string system = render_system_prompt(ctx);
      if (!seen.emplace(system, user).second) continue;
      out.push_back({{{Role::kSystem, std::move(system)},
                      {Role::kUser, std::move(user)},
                      {Role::kAssistant, std::move(assistant)}}});
      break;
    }
  }
  return out;
}

std::vector<ConversationSample> synth_corpus(const SynthOptions& options) {
  std::vector<ConversationSample> samples;
  for (const auto& doc : synth_conversations(options)) {
    SampleError error;
    auto sample = make_sample(doc, &error);
    if (!sample) {
      throw std::logic_error("synthetic sample failed to load: " + error.error_class + ": " +
                             error.reason);
    }
    samples.push_back(std::move(*sample));
  }
  return samples;
}

}  // namespace edgeha
