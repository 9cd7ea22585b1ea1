use super::FlowField;
use crate::video::Frame;

/// Orientation of `(dx, dy)` in degrees on `[0, 360)`.
pub fn flow_hue_deg(dx: f64, dy: f64) -> f64 {
    let deg = dy.atan2(dx).to_degrees();
    let deg = if deg < 0.0 { deg + 360.0 } else { deg };
    if deg >= 360.0 {
        0.0
    } else {
        deg
    }
}

/// Sector-based HSV to RGB with `h` in degrees and `s`, `v` in `[0, 1]`.
pub fn hsv_to_rgb(h: f64, s: f64, v: f64) -> [u8; 3] {
    let c = v * s;
    let hp = h.rem_euclid(360.0) / 60.0;
    let x = c * (1.0 - ((hp % 2.0) - 1.0).abs());
    let (r, g, b) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = v - c;
    let q = |u: f64| ((u + m) * 255.0).round().clamp(0.0, 255.0) as u8;
    [q(r), q(g), q(b)]
}

/// Renders flow as color: orientation drives hue, magnitude relative to
/// `max(frame max magnitude, 1)` drives saturation, value is fixed at 1.
pub fn flow_to_color(flow: &FlowField) -> Frame {
    let m_ref = flow.max_magnitude().max(1.0);
    let mut data = Vec::with_capacity(flow.vectors().len() / 2 * 3);
    for v in flow.vectors().chunks_exact(2) {
        let (dx, dy) = (v[0], v[1]);
        let s = (dx.hypot(dy) / m_ref).min(1.0);
        data.extend_from_slice(&hsv_to_rgb(flow_hue_deg(dx, dy), s, 1.0));
    }
    Frame::new(flow.width(), flow.height(), data).expect("flow field dims are valid")
}
