//! Motion prior: block-matching flow, flow colorization, 6-channel fusion
//! and zero-padded patch-embedding kernels.

mod blockmatch;
mod colorize;
mod embed;
mod fuse;

pub use blockmatch::{estimate_flow, flow_sequence, FlowField, DEFAULT_BLOCK, DEFAULT_RADIUS};
pub use colorize::{flow_hue_deg, flow_to_color, hsv_to_rgb};
pub use embed::{extend_kernel_zero_pad, patch_embed, EmbedKernel, PatchInput};
pub use fuse::{fuse_channels, FusedFrame};
