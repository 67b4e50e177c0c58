//! Categorical labels shared by raw shots, engineered rows and the design
//! matrix.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BodyPartRaw {
    LeftFoot,
    RightFoot,
    Head,
    Other,
}

impl BodyPartRaw {
    pub fn from_statsbomb(name: &str) -> Option<Self> {
        Some(match name {
            "Left Foot" => BodyPartRaw::LeftFoot,
            "Right Foot" => BodyPartRaw::RightFoot,
            "Head" => BodyPartRaw::Head,
            "Other" => BodyPartRaw::Other,
            _ => return None,
        })
    }

    pub fn statsbomb_name(&self) -> &'static str {
        match self {
            BodyPartRaw::LeftFoot => "Left Foot",
            BodyPartRaw::RightFoot => "Right Foot",
            BodyPartRaw::Head => "Head",
            BodyPartRaw::Other => "Other",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Technique {
    Normal,
    HalfVolley,
    Volley,
    Lob,
    OverheadKick,
    DivingHeader,
    Backheel,
}

impl Technique {
    /// Fixed level order; the first entry is the one-hot reference.
    pub const ALL: [Technique; 7] = [
        Technique::Normal,
        Technique::HalfVolley,
        Technique::Volley,
        Technique::Lob,
        Technique::OverheadKick,
        Technique::DivingHeader,
        Technique::Backheel,
    ];

    pub fn from_statsbomb(name: &str) -> Option<Self> {
        Some(match name {
            "Normal" => Technique::Normal,
            "Half Volley" => Technique::HalfVolley,
            "Volley" => Technique::Volley,
            "Lob" => Technique::Lob,
            "Overhead Kick" => Technique::OverheadKick,
            "Diving Header" => Technique::DivingHeader,
            "Backheel" => Technique::Backheel,
            _ => return None,
        })
    }

    pub fn statsbomb_name(&self) -> &'static str {
        match self {
            Technique::Normal => "Normal",
            Technique::HalfVolley => "Half Volley",
            Technique::Volley => "Volley",
            Technique::Lob => "Lob",
            Technique::OverheadKick => "Overhead Kick",
            Technique::DivingHeader => "Diving Header",
            Technique::Backheel => "Backheel",
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Technique::Normal => "normal",
            Technique::HalfVolley => "half_volley",
            Technique::Volley => "volley",
            Technique::Lob => "lob",
            Technique::OverheadKick => "overhead_kick",
            Technique::DivingHeader => "diving_header",
            Technique::Backheel => "backheel",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Foot {
    Left,
    Right,
}

/// Body part relative to the shooter's preferred foot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BodyPart {
    PreferredFoot,
    OtherFoot,
    Head,
    Other,
}

impl BodyPart {
    /// Fixed level order; the first entry is the one-hot reference.
    pub const ALL: [BodyPart; 4] = [
        BodyPart::PreferredFoot,
        BodyPart::OtherFoot,
        BodyPart::Head,
        BodyPart::Other,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            BodyPart::PreferredFoot => "preferred_foot",
            BodyPart::OtherFoot => "other_foot",
            BodyPart::Head => "head",
            BodyPart::Other => "other",
        }
    }
}

/// Collapsed playing position of the shooter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GeneralPosition {
    ST,
    AM,
    M,
    D,
}

impl GeneralPosition {
    pub const ALL: [GeneralPosition; 4] = [
        GeneralPosition::ST,
        GeneralPosition::AM,
        GeneralPosition::M,
        GeneralPosition::D,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            GeneralPosition::ST => "ST",
            GeneralPosition::AM => "AM",
            GeneralPosition::M => "M",
            GeneralPosition::D => "D",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        GeneralPosition::ALL.into_iter().find(|p| p.label() == label)
    }
}

impl fmt::Display for GeneralPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}
