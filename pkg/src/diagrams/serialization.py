"""态射的 JSON 表示

{"source": m, "target": s,
 "terms": [{"coeff": "<标量文本>", "connector": [[i, j], ...], "dots": {"<线编号>": k}, "bubbles": [j, ...]}]}

顶部端点编码为负整数 −1..−s；项的顺序是确定的。
"""
import json

from src.coefficients.scalar import format_scalar, parse_scalar
from src.diagrams.basis import BasisDiagram, Morphism
from src.diagrams.connector import Connector
from src.utils.exceptions import ArityMismatch


def diagram_to_dict(diagram):
    return {
        'connector': diagram.connector.to_list(),
        'dots': {str(k): e for k, e in diagram.dots},
        'bubbles': list(diagram.bubbles),
    }


def morphism_to_dict(f):
    terms = []
    for diagram, coeff in f.items():
        entry = {'coeff': format_scalar(coeff)}
        entry.update(diagram_to_dict(diagram))
        terms.append(entry)
    return {'source': f.m, 'target': f.s, 'terms': terms}


def morphism_to_json(f, indent=None):
    return json.dumps(morphism_to_dict(f), ensure_ascii=False, indent=indent)


def morphism_from_dict(data, env):
    """从字典恢复态射

    Args:
        data: morphism_to_dict 的输出格式
        env: 参数环境，用于解析系数文本

    Returns:
        Morphism: 态射

    Raises:
        ArityMismatch: 连接子与声明的元数不符
    """
    m, s = int(data['source']), int(data['target'])
    terms = {}
    for entry in data.get('terms', []):
        try:
            connector = Connector.from_pairs([tuple(p) for p in entry['connector']], m, s)
        except ValueError as exc:
            raise ArityMismatch(f"连接子与 Hom({m},{s}) 不符: {exc}") from exc
        dots = tuple((int(k), int(v)) for k, v in entry.get('dots', {}).items())
        diagram = BasisDiagram(connector, dots, tuple(entry.get('bubbles', [])))
        coeff = parse_scalar(entry['coeff'], env)
        terms[diagram] = terms[diagram] + coeff if diagram in terms else coeff
    return Morphism(m, s, env.ring, terms)


def morphism_from_json(text, env):
    return morphism_from_dict(json.loads(text), env)
