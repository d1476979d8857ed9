from django.http import JsonResponse
from django.shortcuts import get_object_or_404
from django.views.decorators.http import require_GET

from .models import ConstructionRun


@require_GET
def run_list(request):
    """Every construction run, newest first"""
    runs = ConstructionRun.objects.order_by('-created_at', '-id')
    status = request.GET.get('status')
    if status:
        runs = runs.filter(status=status)
    return JsonResponse({'runs': [run.as_dict() for run in runs]})


@require_GET
def run_status(request, pk):
    run = get_object_or_404(ConstructionRun, pk=pk)
    return JsonResponse(run.as_dict())


@require_GET
def run_conditions(request, pk):
    """Condition report of a run; 409 while the run has not been checked"""
    run = get_object_or_404(ConstructionRun, pk=pk)
    if not run.conditions:
        return JsonResponse({'id': run.id, 'status': run.status, 'error': "no condition report yet"}, status=409)
    return JsonResponse({'id': run.id, 'status': run.status, **run.conditions})
