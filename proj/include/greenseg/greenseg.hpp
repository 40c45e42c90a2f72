#ifndef GREENSEG_GREENSEG_HPP
#define GREENSEG_GREENSEG_HPP

#include "greenseg/attributes.hpp"
#include "greenseg/dataset.hpp"
#include "greenseg/error.hpp"
#include "greenseg/evaluation.hpp"
#include "greenseg/extractor.hpp"
#include "greenseg/feature_io.hpp"
#include "greenseg/gbdt.hpp"
#include "greenseg/half.hpp"
#include "greenseg/kdtree.hpp"
#include "greenseg/matrix.hpp"
#include "greenseg/parallel.hpp"
#include "greenseg/pipeline.hpp"
#include "greenseg/point_cloud.hpp"
#include "greenseg/preprocess.hpp"
#include "greenseg/random.hpp"
#include "greenseg/room_io.hpp"
#include "greenseg/s3dis.hpp"
#include "greenseg/sampling.hpp"
#include "greenseg/voxel.hpp"

#endif // GREENSEG_GREENSEG_HPP
