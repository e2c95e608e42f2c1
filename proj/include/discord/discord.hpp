#pragma once

#include "discord/errors.hpp"
#include "discord/evolution.hpp"
#include "discord/measures.hpp"
#include "discord/parallel.hpp"
#include "discord/protocol.hpp"
#include "discord/states.hpp"
#include "discord/tensor.hpp"
#include "discord/models/emission.hpp"
#include "discord/models/ion.hpp"
#include "discord/models/photon.hpp"
#include "discord/models/spinchain.hpp"
