use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const CATALOG_SIZE: usize = 59;

/// Edge a sweep starts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Left,
    Right,
    Top,
    Bottom,
}

/// Direction a frame travels in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Motion {
    Left,
    Right,
    Up,
    Down,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corner {
    TopLeft,
    TopRight,
    BottomLeft,
    BottomRight,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    Cut,
    Fade,
    /// `w = p^gamma`
    FadeCurve { gamma: f64 },
    Dissolve,
    /// Through a solid color at `p = 0.5`.
    FadeThrough([u8; 3]),
    FadeGrays,
    Distance,
    /// Edge wipe; the incoming frame covers the side nearest `Origin` last.
    Wipe(Origin),
    /// Rectangle growing from the corner opposite the named one.
    CornerWipe(Corner),
    Diagonal(Corner),
    Slide(Motion),
    Smooth(Motion),
    Cover(Motion),
    Reveal(Motion),
    CircleOpen,
    CircleClose,
    CircleCrop,
    RectCrop,
    VertOpen,
    VertClose,
    HorzOpen,
    HorzClose,
    Radial,
    Slice(Origin),
    Wind(Origin),
    SqueezeH,
    SqueezeV,
    ZoomIn,
    HBlur,
    Pixelize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Easing {
    Linear,
    Fast,
    Slow,
    Smooth,
}

impl Easing {
    pub fn apply(self, p: f64) -> f64 {
        match self {
            Easing::Linear => p,
            Easing::Fast => p.sqrt(),
            Easing::Slow => p * p,
            Easing::Smooth => p * p * (3.0 - 2.0 * p),
        }
    }
}

const BLACK: [u8; 3] = [0, 0, 0];
const WHITE: [u8; 3] = [255, 255, 255];

static CATALOG: [(&str, Family); CATALOG_SIZE] = [
    ("cut", Family::Cut),
    ("fade", Family::Fade),
    ("wipeleft", Family::Wipe(Origin::Right)),
    ("wiperight", Family::Wipe(Origin::Left)),
    ("wipeup", Family::Wipe(Origin::Bottom)),
    ("wipedown", Family::Wipe(Origin::Top)),
    ("slideleft", Family::Slide(Motion::Left)),
    ("slideright", Family::Slide(Motion::Right)),
    ("slideup", Family::Slide(Motion::Up)),
    ("slidedown", Family::Slide(Motion::Down)),
    ("circlecrop", Family::CircleCrop),
    ("rectcrop", Family::RectCrop),
    ("distance", Family::Distance),
    ("fadeblack", Family::FadeThrough(BLACK)),
    ("fadewhite", Family::FadeThrough(WHITE)),
    ("radial", Family::Radial),
    ("smoothleft", Family::Smooth(Motion::Left)),
    ("smoothright", Family::Smooth(Motion::Right)),
    ("smoothup", Family::Smooth(Motion::Up)),
    ("smoothdown", Family::Smooth(Motion::Down)),
    ("circleopen", Family::CircleOpen),
    ("circleclose", Family::CircleClose),
    ("vertopen", Family::VertOpen),
    ("vertclose", Family::VertClose),
    ("horzopen", Family::HorzOpen),
    ("horzclose", Family::HorzClose),
    ("dissolve", Family::Dissolve),
    ("pixelize", Family::Pixelize),
    ("diagtl", Family::Diagonal(Corner::TopLeft)),
    ("diagtr", Family::Diagonal(Corner::TopRight)),
    ("diagbl", Family::Diagonal(Corner::BottomLeft)),
    ("diagbr", Family::Diagonal(Corner::BottomRight)),
    ("hlslice", Family::Slice(Origin::Left)),
    ("hrslice", Family::Slice(Origin::Right)),
    ("vuslice", Family::Slice(Origin::Top)),
    ("vdslice", Family::Slice(Origin::Bottom)),
    ("hblur", Family::HBlur),
    ("fadegrays", Family::FadeGrays),
    ("wipetl", Family::CornerWipe(Corner::TopLeft)),
    ("wipetr", Family::CornerWipe(Corner::TopRight)),
    ("wipebl", Family::CornerWipe(Corner::BottomLeft)),
    ("wipebr", Family::CornerWipe(Corner::BottomRight)),
    ("squeezeh", Family::SqueezeH),
    ("squeezev", Family::SqueezeV),
    ("zoomin", Family::ZoomIn),
    ("fadefast", Family::FadeCurve { gamma: 0.5 }),
    ("fadeslow", Family::FadeCurve { gamma: 2.0 }),
    ("hlwind", Family::Wind(Origin::Left)),
    ("hrwind", Family::Wind(Origin::Right)),
    ("vuwind", Family::Wind(Origin::Bottom)),
    ("vdwind", Family::Wind(Origin::Top)),
    ("coverleft", Family::Cover(Motion::Left)),
    ("coverright", Family::Cover(Motion::Right)),
    ("coverup", Family::Cover(Motion::Up)),
    ("coverdown", Family::Cover(Motion::Down)),
    ("revealleft", Family::Reveal(Motion::Left)),
    ("revealright", Family::Reveal(Motion::Right)),
    ("revealup", Family::Reveal(Motion::Up)),
    ("revealdown", Family::Reveal(Motion::Down)),
];

/// Index into the transition catalog.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EffectId(u8);

impl EffectId {
    pub const CUT: EffectId = EffectId(0);
    pub const FADE: EffectId = EffectId(1);

    pub fn from_index(i: usize) -> Option<Self> {
        (i < CATALOG_SIZE).then_some(EffectId(i as u8))
    }

    pub fn from_name(name: &str) -> Result<Self> {
        CATALOG
            .iter()
            .position(|(n, _)| *n == name)
            .map(|i| EffectId(i as u8))
            .ok_or_else(|| Error::Catalog(name.to_string()))
    }

    /// All 59 effects in catalog order.
    pub fn all() -> impl ExactSizeIterator<Item = EffectId> + Clone {
        (0..CATALOG_SIZE as u8).map(EffectId)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn name(self) -> &'static str {
        CATALOG[self.0 as usize].0
    }

    pub fn family(self) -> Family {
        CATALOG[self.0 as usize].1
    }

    pub fn is_cut(self) -> bool {
        self == EffectId::CUT
    }

    pub fn easing(self) -> Easing {
        match self.family() {
            Family::FadeCurve { gamma } if gamma < 1.0 => Easing::Fast,
            Family::FadeCurve { .. } => Easing::Slow,
            Family::Smooth(_) => Easing::Smooth,
            _ => Easing::Linear,
        }
    }
}

impl fmt::Debug for EffectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EffectId({})", self.name())
    }
}

impl fmt::Display for EffectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EffectId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EffectId::from_name(s)
    }
}

impl Serialize for EffectId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for EffectId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let name = String::deserialize(d)?;
        EffectId::from_name(&name).map_err(serde::de::Error::custom)
    }
}
