use crate::error::{Error, Result};
use crate::video::Frame;

/// Six 8-bit channels per pixel: color RGB followed by flow-visualization RGB.
#[derive(Clone, PartialEq, Eq)]
pub struct FusedFrame {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl std::fmt::Debug for FusedFrame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FusedFrame({}x{})", self.width, self.height)
    }
}

impl FusedFrame {
    pub fn from_raw(width: u32, height: u32, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::pre("fused frame dimensions must be positive"));
        }
        if data.len() != width as usize * height as usize * 6 {
            return Err(Error::pre(format!(
                "{} bytes for a {width}x{height} fused frame",
                data.len()
            )));
        }
        Ok(FusedFrame { width, height, data })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dims(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    fn channels(&self, offset: usize) -> Frame {
        let data = self.data.chunks_exact(6).flat_map(|p| p[offset..offset + 3].iter().copied()).collect();
        Frame::new(self.width, self.height, data).expect("dims already validated")
    }

    /// Channels 0..3.
    pub fn color(&self) -> Frame {
        self.channels(0)
    }

    /// Channels 3..6.
    pub fn flow_viz(&self) -> Frame {
        self.channels(3)
    }
}

pub fn fuse_channels(color: &Frame, flow_viz: &Frame) -> Result<FusedFrame> {
    if color.dims() != flow_viz.dims() {
        return Err(Error::pre(format!(
            "cannot fuse {:?} with {:?}",
            color.dims(),
            flow_viz.dims()
        )));
    }
    let mut data = Vec::with_capacity(color.data().len() * 2);
    for (c, f) in color.data().chunks_exact(3).zip(flow_viz.data().chunks_exact(3)) {
        data.extend_from_slice(c);
        data.extend_from_slice(f);
    }
    let (w, h) = color.dims();
    Ok(FusedFrame { width: w, height: h, data })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concat_and_project() {
        let color = Frame::from_fn(2, 2, |x, y| [x as u8, y as u8, 7]);
        let viz = Frame::from_fn(2, 2, |x, y| [200, (x + y) as u8, 9]);
        let fused = fuse_channels(&color, &viz).unwrap();
        assert_eq!(fused.data().len(), 24);
        assert_eq!(&fused.data()[..6], &[0, 0, 7, 200, 0, 9]);
        assert_eq!(fused.color(), color);
        assert_eq!(fused.flow_viz(), viz);
        assert_eq!(fused.dims(), color.dims());
    }

    #[test]
    fn mismatch_rejected() {
        let a = Frame::solid(2, 2, [0; 3]);
        let b = Frame::solid(3, 2, [0; 3]);
        assert!(fuse_channels(&a, &b).is_err());
        assert!(FusedFrame::from_raw(2, 2, vec![0; 23]).is_err());
        assert!(FusedFrame::from_raw(0, 2, vec![]).is_err());
    }
}
