//! Frames, clips and raw video I/O.

mod frame;
mod ppm;
mod rawvid;

pub(crate) use frame::luma as frame_luma;
pub use frame::{to_grayscale, ClipView, Fps, Frame, LumaPlane, VideoClip};
pub use ppm::{import_ppm_sequence, read_ppm, write_ppm};
pub use rawvid::{
    decode_fused, decode_rawvid, encode_fused, encode_rawvid, load_fused, load_rawvid,
    save_fused, save_rawvid, FUSED_MAGIC, HEADER_LEN, RAW_MAGIC,
};
