#pragma once

#include "vltm/errors.hpp"
#include "vltm/fft.hpp"
#include "vltm/imaging.hpp"
#include "vltm/impulse.hpp"
#include "vltm/io/artifacts.hpp"
#include "vltm/io/config.hpp"
#include "vltm/io/nlir.hpp"
#include "vltm/io/scene_json.hpp"
#include "vltm/ltm.hpp"
#include "vltm/parallel.hpp"
#include "vltm/phasor.hpp"
#include "vltm/relay.hpp"
#include "vltm/scene.hpp"
#include "vltm/simulate.hpp"
#include "vltm/time_axis.hpp"
#include "vltm/vec3.hpp"
#include "vltm/voxel_grid.hpp"
#include "vltm/wave.hpp"
