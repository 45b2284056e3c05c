"""
Construtor mínimo de documentos SVG 1.1 para os retratos no disco
"""

from typing import Dict, Iterable, Optional, Tuple
from xml.sax.saxutils import escape


class SVG:
    def __init__(self):
        self.svg = ""

    def header(self, width, height):
        self.svg += f"""<?xml version="1.0" standalone="no"?>
<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" "http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">
<svg version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}" xmlns="http://www.w3.org/2000/svg">
"""

    def group_start(self, attr: Dict[str, str]):
        g_attr = [f'{key}="{escape(str(value))}"' for key, value in attr.items() if key in ['id', 'class']]
        if 'g_extra' in attr:
            g_attr.append(attr['g_extra'])
        self.svg += f'<g {" ".join(g_attr)}>\n'
        if 'title' in attr:
            self.svg += f'<title>{escape(attr["title"])}</title>\n'

    def group_end(self):
        self.svg += '</g>\n'

    def filled_rectangle(self, x1, y1, x2, y2, fill, extra=""):
        width = x2 - x1
        height = y2 - y1
        self.svg += f'<rect x="{x1:.1f}" y="{y1:.1f}" width="{width:.1f}" height="{height:.1f}" fill="{fill}" {extra}/>\n'

    def circle(self, cx, cy, r, stroke="none", fill="none", extra=""):
        self.svg += f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="{r:.3f}" stroke="{stroke}" fill="{fill}" {extra}/>\n'

    def polyline(self, points: Iterable[Tuple[float, float]], stroke="black", width=1.0, extra=""):
        coords = " ".join(f"{x:.3f},{y:.3f}" for x, y in points)
        self.svg += f'<polyline points="{coords}" fill="none" stroke="{stroke}" stroke-width="{width:.2f}" {extra}/>\n'

    def arrow(self, tip: Tuple[float, float], direction: Tuple[float, float], size=6.0, fill="black"):
        """Ponta de seta triangular em tip, apontando para direction (vetor unitário)"""
        dx, dy = direction
        bx, by = tip[0] - size * dx, tip[1] - size * dy
        # perpendicular
        px, py = -dy * size * 0.45, dx * size * 0.45
        self.svg += (
            f'<polygon points="{tip[0]:.3f},{tip[1]:.3f} {bx + px:.3f},{by + py:.3f} '
            f'{bx - px:.3f},{by - py:.3f}" fill="{fill}"/>\n'
        )

    def string_ttf(self, id: Optional[str], x, y, string, extra=""):
        id_attr = f'id="{id}" ' if id else ''
        self.svg += f'<text {id_attr}x="{x:.2f}" y="{y}" {extra}>{escape(string)}</text>\n'

    def get_svg(self):
        return f"{self.svg}</svg>\n"
