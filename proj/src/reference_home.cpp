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

#include "edgeha/reference_home.hpp"

#include <array>

namespace edgeha::reference {

const std::string_view kSystemText =
    "You are 'Al', a helpful AI Assistant that controls the devices in a house. Complete the "
    "following task as instructed or answer the following question with the information "
    "provided only.\n"
    "Services: cover.close_cover(), cover.open_cover(), cover.stop_cover(), cover.toggle(), "
    "lock.lock(), lock.unlock(), media_player.media_next_track(), media_player.media_pause(), "
    "media_player.media_play(), media_player.media_play_pause(), "
    "media_player.media_previous_track(), media_player.media_stop(), media_player.toggle(), "
    "media_player.turn_off(), media_player.turn_on(), media_player.volume_down(), "
    "media_player.volume_mute(), media_player.volume_up(), switch.toggle(), switch.turn_off(), "
    "switch.turn_on(), timer.cancel(), timer.pause(), timer.start(duration), vacuum.pause(), "
    "vacuum.return_to_base(), vacuum.start(), vacuum.stop()\n"
    "Devices: media_player.harman_kardon_aura 'Harman Kardon Glass Speaker' = standby; vol=0.88\n"
    "timer.kitchen_oven 'Kitchen oven timer' = active\n"
    "lock.office_cabinet 'Office cabinet lock' = unlocked\n"
    "cover.master_bedroom 'Master Bedroom' = closed\n"
    "vacuum.hallway_neato 'Hallway path cleaner' = docked\n"
    "switch.basement_lights 'Basement Lights Switch' = off";

const std::string_view kAssistantText =
    "switching Master Bedroom state as requested\n"
    "```homeassistant\n"
    "{\n"
    "  \"service\": \"cover.toggle\",\n"
    "  \"target_device\": \"cover.master_bedroom\"\n"
    "}\n"
    "```";

SystemContext default_home() { return parse_system_prompt(kSystemText); }

namespace {

constexpr std::array<ClassCount, 38> kInventory = {{
    {"climate.set_fan_mode", 1080, 0},
    {"climate.set_humidity", 1080, 0},
    {"climate.set_hvac_mode", 1080, 0},
    {"climate.set_temperature", 1000, 0},
    {"cover.close", 385, 35},
    {"cover.open", 395, 40},
    {"cover.stop", 320, 25},
    {"cover.toggle", 365, 25},
    {"fan.decrease_speed", 360, 60},
    {"fan.increase_speed", 300, 40},
    {"fan.toggle", 390, 85},
    {"fan.turn_off", 390, 70},
    {"fan.turn_on", 405, 60},
    {"light.toggle", 450, 90},
    {"light.turn_off", 2535, 600},
    {"light.turn_on", 11940, 150},
    {"lock.lock", 200, 125},
    {"lock.unlock", 185, 125},
    {"media_player.media_next_track", 55, 25},
    {"media_player.media_pause", 55, 25},
    {"media_player.media_play", 70, 25},
    {"media_player.media_previous_track", 55, 25},
    {"media_player.media_stop", 55, 25},
    {"media_player.turn_off", 25, 25},
    {"media_player.turn_on", 40, 40},
    {"media_player.volume_down", 65, 35},
    {"media_player.volume_mute", 60, 30},
    {"media_player.volume_up", 85, 40},
    {"switch.toggle", 250, 50},
    {"switch.turn_off", 500, 175},
    {"switch.turn_on", 540, 165},
    {"timer.cancel", 600, 0},
    {"timer.start", 600, 0},
    {"todo.add_item", 1560, 0},
    {"vacuum.pause", 15, 0},
    {"vacuum.return_to_base", 150, 0},
    {"vacuum.start", 370, 220},
    {"vacuum.stop", 15, 0},
}};

}  // namespace

std::span<const ClassCount> class_inventory() { return kInventory; }

ServiceCatalog builtin_catalog() {
  ServiceCatalog catalog;
  for (const auto& entry : kInventory) {
    ServiceSignature sig = ServiceSignature::parse(entry.service);
    if (sig.canonical() == "timer.start") sig.params = {"duration"};
    if (sig.canonical() == "climate.set_temperature") sig.params = {"temperature"};
    if (sig.canonical() == "climate.set_humidity") sig.params = {"humidity"};
    if (sig.canonical() == "climate.set_fan_mode") sig.params = {"fan_mode"};
    if (sig.canonical() == "climate.set_hvac_mode") sig.params = {"hvac_mode"};
    if (sig.canonical() == "todo.add_item") sig.params = {"item"};
    catalog.add(std::move(sig));
  }
  for (const char* extra : {"cover.close_cover()", "cover.open_cover()", "cover.stop_cover()",
                            "media_player.media_play_pause()", "media_player.toggle()",
                            "timer.pause()"}) {
    catalog.add(ServiceSignature::parse(extra));
  }
  return catalog;
}

}  // namespace edgeha::reference
