#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "outerface/corpus.hpp"
#include "outerface/model.hpp"

namespace outerface {

// SGD schedule. The published configuration is paper_preset(); desk_preset()
// is the minutes-scale configuration used by the synthetic-corpus pipeline.
struct TrainSchedule {
    int epochs = 10;
    int batch_size = 100;
    double base_lr = 0.05;
    std::vector<int> lr_drop_epochs = {6, 8};  // divide lr by 10 after these epochs
    double momentum = 0.9;
    double weight_decay = 5e-4;
    uint64_t rng_seed = 1;
    int threads = 1;

    void validate() const;
    double lr_for_epoch(int epoch_1based) const;

    static TrainSchedule paper_preset();  // 30 epochs, batch 400, lr 0.1 / {12,15,18}
    static TrainSchedule desk_preset();
};

struct EpochStats {
    int epoch = 0;
    double mean_loss = 0.0;
    double train_accuracy = 0.0;
    double lr = 0.0;
};

struct TrainResult {
    EmbeddingModel model;
    std::vector<EpochStats> log;
    std::vector<std::string> class_identities;  // class id -> identity string
    uint64_t fake_samples_read = 0;             // audit counter, must be 0
};

// Trains an embedding model on the manifest's train split (real frames
// only; a fake-labeled train entry is a hard FakeFreeViolation error before
// any pixel is read). Every sample is aligned, cropped and masked before
// the forward pass. Deterministic given schedule.rng_seed.
TrainResult train_model(const ModelConfig& cfg, const MaskSpec& mask, const CropSpec& crop,
                        const LossConfig& loss_cfg, const Manifest& manifest,
                        const TrainSchedule& schedule);

void write_train_log_csv(const std::vector<EpochStats>& log, const std::filesystem::path& path);

}  // namespace outerface
